//! Sentence and word segmentation over extracted policy text.

use std::ops::Range;

/// Lower-cased abbreviations whose trailing period never ends a sentence.
/// Dotted forms (`e.g.`, `U.S.`) and single-letter initials are handled
/// structurally and need not be listed.
const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "inc", "ltd", "co", "corp", "llc", "vs", "approx", "dept",
    "fig", "vol", "cf", "jan", "feb", "apr", "aug", "sept", "oct", "nov",
];

const CLOSERS: &[char] = &['"', '\'', '\u{201d}', '\u{2019}', ')', ']'];

/// Byte ranges of the sentences in `text`, trimmed, empty ones dropped.
///
/// Sentences end at `.`, `!` or `?` followed by whitespace (or end of text),
/// and at every newline. A period after a known abbreviation, an initial, or
/// a dotted acronym does not end a sentence.
pub fn sentence_spans(text: &str) -> Vec<Range<usize>> {
    let mut spans = Vec::new();
    let mut start = 0;
    let mut iter = text.char_indices().peekable();
    while let Some((i, c)) = iter.next() {
        if c == '\n' {
            push_trimmed(text, start..i, &mut spans);
            start = i + 1;
            continue;
        }
        if !matches!(c, '.' | '!' | '?') {
            continue;
        }
        let mut end = i + c.len_utf8();
        while let Some(&(j, next)) = iter.peek() {
            if matches!(next, '.' | '!' | '?') || CLOSERS.contains(&next) {
                end = j + next.len_utf8();
                iter.next();
            } else {
                break;
            }
        }
        let followed_by_break = text[end..].chars().next().is_none_or(char::is_whitespace);
        if !followed_by_break {
            continue;
        }
        if c == '.' && end == i + 1 && is_abbreviation(&text[..i]) {
            continue;
        }
        push_trimmed(text, start..end, &mut spans);
        start = end;
    }
    push_trimmed(text, start..text.len(), &mut spans);
    spans
}

/// Sentences of `text` as string slices.
pub fn segment_sentences(text: &str) -> Vec<&str> {
    sentence_spans(text).into_iter().map(|r| &text[r]).collect()
}

fn push_trimmed(text: &str, range: Range<usize>, out: &mut Vec<Range<usize>>) {
    let slice = &text[range.clone()];
    let lead = slice.len() - slice.trim_start().len();
    let trail = slice.len() - slice.trim_end().len();
    if lead + trail < slice.len() {
        out.push(range.start + lead..range.end - trail);
    }
}

/// Does the word immediately before a period (ending at `before.len()`) make
/// that period an abbreviation mark?
fn is_abbreviation(before: &str) -> bool {
    let word_start = before
        .char_indices()
        .rev()
        .find(|&(_, c)| !(c.is_alphanumeric() || c == '.'))
        .map_or(0, |(i, c)| i + c.len_utf8());
    let word = before[word_start..].to_lowercase();
    if word.is_empty() {
        return false;
    }
    if word.contains('.') {
        return word
            .split('.')
            .all(|part| !part.is_empty() && part.chars().count() <= 2 && part.chars().all(char::is_alphabetic));
    }
    let mut chars = word.chars();
    let single_letter = matches!((chars.next(), chars.next()), (Some(c), None) if c.is_alphabetic());
    single_letter || ABBREVIATIONS.contains(&word.as_str())
}

/// Byte ranges of word tokens: maximal runs of alphanumerics, allowing an
/// apostrophe between letters (`don't`). Tokens without a letter are dropped.
pub fn word_spans(text: &str) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        let inner_apostrophe =
            matches!(c, '\'' | '\u{2019}') && start.is_some() && chars.peek().is_some_and(|&(_, n)| n.is_alphabetic());
        if c.is_alphanumeric() || inner_apostrophe {
            start.get_or_insert(i);
        } else if let Some(s) = start.take() {
            out.push(s..i);
        }
    }
    if let Some(s) = start {
        out.push(s..text.len());
    }
    out.retain(|r| text[r.clone()].chars().any(char::is_alphabetic));
    out
}

pub fn words(text: &str) -> Vec<&str> {
    word_spans(text).into_iter().map(|r| &text[r]).collect()
}
