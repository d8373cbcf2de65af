//! HTML and plain-text extraction.

use std::sync::LazyLock;

use regex::Regex;
use scraper::{ElementRef, Html, Node, Selector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("no visible text after extraction{}", note.as_ref().map(|n| format!(" ({n})")).unwrap_or_default())]
    EmptyAfterExtraction { note: Option<String> },
}

/// Elements whose content is never policy text.
const DROPPED: &[&str] = &[
    "script", "style", "noscript", "template", "nav", "header", "footer", "aside", "form", "button", "select",
    "iframe", "svg", "canvas", "object", "embed", "head", "menu",
];

const BLOCKS: &[&str] = &[
    "address",
    "article",
    "blockquote",
    "body",
    "caption",
    "dd",
    "details",
    "div",
    "dl",
    "dt",
    "fieldset",
    "figcaption",
    "figure",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "hr",
    "html",
    "li",
    "main",
    "ol",
    "p",
    "pre",
    "section",
    "summary",
    "table",
    "tbody",
    "td",
    "tfoot",
    "th",
    "thead",
    "tr",
    "ul",
];

/// Containers checked for link domination.
const LINK_CHECKED: &[&str] = &["div", "ul", "ol", "dl", "table", "tr", "li", "p", "section"];

pub const LINK_RATIO_LIMIT: f64 = 0.5;

static LINKS: LazyLock<Selector> = LazyLock::new(|| Selector::parse("a").expect("selector"));
static TAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"<[^<>]*>").expect("tag regex"));

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Html,
    Plain,
    Pdf,
}

fn kind_of(content_type: &str) -> Kind {
    let mime = content_type.split(';').next().unwrap_or("").trim().to_ascii_lowercase();
    match mime.as_str() {
        "text/plain" => Kind::Plain,
        "application/pdf" => Kind::Pdf,
        _ => Kind::Html,
    }
}

/// Visible text of a response body.
///
/// HTML is stripped of non-content elements and link-dominated blocks;
/// block boundaries become newlines. Both paths then normalize whitespace
/// per line and remove control characters and tag remnants, so feeding the
/// output back as `text/plain` returns it unchanged.
pub fn extract_text(raw: &[u8], content_type: &str) -> Result<String, ExtractError> {
    let kind = kind_of(content_type);
    if kind == Kind::Pdf || raw.starts_with(b"%PDF-") {
        return Err(ExtractError::EmptyAfterExtraction { note: Some("PDF documents are not parsed".into()) });
    }
    let decoded = String::from_utf8_lossy(raw);
    let text = match kind {
        Kind::Plain => normalize(&decoded),
        _ => normalize(&html_to_text(&decoded)),
    };
    if text.is_empty() {
        return Err(ExtractError::EmptyAfterExtraction { note: None });
    }
    Ok(text)
}

fn html_to_text(source: &str) -> String {
    let doc = Html::parse_document(source);
    let mut out = String::new();
    walk(doc.root_element(), &mut out);
    out
}

fn walk(element: ElementRef<'_>, out: &mut String) {
    let el = element.value();
    let name = el.name();
    if DROPPED.contains(&name) || el.attr("hidden").is_some() || el.attr("aria-hidden") == Some("true") {
        return;
    }
    if LINK_CHECKED.contains(&name) && link_dominated(element) {
        return;
    }
    let block = BLOCKS.contains(&name);
    if block {
        out.push('\n');
    }
    for child in element.children() {
        match child.value() {
            Node::Text(t) => out.extend(t.chars().map(|c| if c == '\n' || c == '\r' { ' ' } else { c })),
            Node::Element(e) if e.name() == "br" => out.push('\n'),
            Node::Element(_) => {
                if let Some(child_el) = ElementRef::wrap(child) {
                    walk(child_el, out);
                }
            }
            _ => {}
        }
    }
    if block {
        out.push('\n');
    }
}

fn visible_len<'a>(parts: impl Iterator<Item = &'a str>) -> usize {
    parts.map(|s| s.chars().filter(|c| !c.is_whitespace()).count()).sum()
}

fn link_dominated(element: ElementRef<'_>) -> bool {
    let total = visible_len(element.text());
    if total == 0 {
        return false;
    }
    let linked: usize = element.select(&LINKS).map(|a| visible_len(a.text())).sum();
    linked as f64 / total as f64 > LINK_RATIO_LIMIT
}

fn is_invisible(c: char) -> bool {
    (c.is_control() && c != '\n')
        || matches!(c, '\u{200b}'..='\u{200f}' | '\u{2028}'..='\u{202e}' | '\u{2060}'..='\u{2064}' | '\u{feff}' | '\u{00ad}')
}

/// Per-line whitespace collapse, invisible-character removal and tag
/// stripping to a fixed point. Empty lines are dropped.
pub(crate) fn normalize(text: &str) -> String {
    let mut current = text.replace("\r\n", "\n").replace('\r', "\n");
    loop {
        let cleaned: String =
            current.chars().map(|c| if c == '\t' { ' ' } else { c }).filter(|&c| !is_invisible(c)).collect();
        let stripped = TAG.replace_all(&cleaned, " ").replace(['<', '>'], " ");
        let next = stripped
            .lines()
            .map(|line| line.split_whitespace().collect::<Vec<_>>().join(" "))
            .filter(|line| !line.is_empty())
            .collect::<Vec<_>>()
            .join("\n");
        if next == current {
            return next;
        }
        current = next;
    }
}
