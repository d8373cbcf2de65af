//! Per-app narrative report.

use std::fmt::Write as _;
use std::ops::Range;

use crate::assess::AppAssessment;
use crate::corpus::AppRecord;
use crate::detect::{DurationUnit, Finding, FindingDetail};
use crate::dimension::DetectionDimension as D;
use crate::score::{PolicyAccess, ELEMENT_NAMES};
use crate::text::sentence_spans;

pub const EXCERPT_LIMIT: usize = 200;
const EXCERPTS_PER_FINDING: usize = 3;

const ELEMENT_DIMENSIONS: [&[D]; 5] = [
    &[D::HipaaMention, D::GdprMention, D::OtherRegulation],
    &[D::DataEncryption, D::AccessControls, D::BreachProtocol],
    &[D::AmbiguousLanguage, D::VagueCommitments, D::AccessibilityAccommodations],
    &[D::DataMinimization, D::RetentionTime],
    &[D::ThirdPartySharing],
];

/// The sentence around `span`, cut to at most [`EXCERPT_LIMIT`] characters
/// centred on the match.
pub fn excerpt(text: &str, span: Range<usize>, sentences: &[Range<usize>]) -> String {
    let sentence = sentences
        .iter()
        .find(|s| s.start <= span.start && span.start < s.end.max(s.start + 1))
        .cloned()
        .unwrap_or(span.clone());
    let sentence = sentence.start.min(span.start)..sentence.end.max(span.end.min(text.len()));
    let chars: Vec<(usize, char)> = text[sentence.clone()].char_indices().collect();
    if chars.len() <= EXCERPT_LIMIT {
        return text[sentence].to_string();
    }
    let match_char = chars.iter().position(|(i, _)| sentence.start + i >= span.start).unwrap_or(0);
    let budget = EXCERPT_LIMIT - 2;
    let first = match_char.saturating_sub(budget / 4).min(chars.len() - budget);
    let last = first + budget;
    let start = sentence.start + chars[first].0;
    let end = if last < chars.len() { sentence.start + chars[last].0 } else { sentence.end };
    let lead = if first > 0 { "…" } else { "" };
    let tail = if last < chars.len() { "…" } else { "" };
    format!("{lead}{}{tail}", text[start..end].trim())
}

fn detail_text(d: &FindingDetail) -> String {
    match d {
        FindingDetail::Retention { amount, unit, days } => {
            let name = format!("{unit:?}").to_lowercase();
            let plural = if *amount == 1 { "" } else { "s" };
            if *unit == DurationUnit::Day {
                format!("stated retention: {amount} day{plural}")
            } else {
                format!("stated retention: {amount} {name}{plural} ({days} days)")
            }
        }
        FindingDetail::Regulations { names } => format!("regulations named: {}", names.join(", ")),
        FindingDetail::HedgeDensity { hedged, sentences } => {
            format!("hedged sentences: {hedged} of {sentences}")
        }
        FindingDetail::GenericAssurances { sentences } => format!("generic assurances: {sentences}"),
    }
}

fn write_finding(out: &mut String, f: &Finding, text: Option<&str>, sentences: &[Range<usize>]) {
    let manual = if f.manual { " (manual)" } else { "" };
    let _ = writeln!(out, "- {}: {}{manual}", f.dimension.title(), f.verdict);
    if let Some(d) = &f.detail {
        let _ = writeln!(out, "  - {}", detail_text(d));
    }
    let Some(text) = text else { return };
    let mut quoted: Vec<String> = Vec::new();
    for e in &f.evidence {
        if e.end > text.len() || !text.is_char_boundary(e.start) || !text.is_char_boundary(e.end) {
            continue;
        }
        let q = excerpt(text, e.range(), sentences);
        if !quoted.contains(&q) {
            quoted.push(q);
        }
        if quoted.len() == EXCERPTS_PER_FINDING {
            break;
        }
    }
    for q in quoted {
        let _ = writeln!(out, "  > \"{q}\"");
    }
}

/// Markdown report for one app.
pub fn emit_app_report(a: &AppAssessment, record: Option<&AppRecord>, reveal_names: bool) -> String {
    let mut out = String::new();
    let name = record
        .filter(|_| reveal_names)
        .and_then(|r| r.real_name.as_ref())
        .map(|n| format!(" ({})", n.reveal()))
        .unwrap_or_default();
    let _ = writeln!(out, "# {}{name}\n", a.app);
    let _ = writeln!(out, "Category: {}\n", a.category.label());
    if a.access == PolicyAccess::Inaccessible {
        let reason = a.inaccessible_reason.as_deref().unwrap_or("unknown reason");
        let _ = writeln!(out, "Privacy policy inaccessible: {reason}.\n");
        let _ = writeln!(out, "All element scores are 0. Overall risk score: 0.");
        return out;
    }
    let text = a.text.as_deref();
    let sentences = text.map(sentence_spans).unwrap_or_default();
    let scores = a.profile.elements();
    for (i, dims) in ELEMENT_DIMENSIONS.iter().enumerate() {
        let _ = writeln!(out, "## {}: {}\n", ELEMENT_NAMES[i], scores[i]);
        if i == 2 {
            if let Some(r) = &a.readability {
                let source = if r.manual { " (manual)" } else { "" };
                let _ = writeln!(
                    out,
                    "- Readability: SMOG {:.1}, {} ({} points){source}",
                    r.smog_grade,
                    r.band.label(),
                    r.points
                );
            }
        }
        for &d in *dims {
            write_finding(&mut out, a.finding(d), text, &sentences);
        }
        out.push('\n');
    }
    let _ = writeln!(out, "## Not scored\n");
    write_finding(&mut out, a.finding(D::ConsentRequirements), text, &sentences);
    let _ = writeln!(out, "\nOverall risk score: {}.", a.profile.overall);
    out
}
