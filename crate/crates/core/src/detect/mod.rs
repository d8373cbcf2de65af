//! Rule-based detection of regulation mentions and privacy principles.
//!
//! Every detector returns a [`Finding`]: a tri-state verdict plus the byte
//! spans of the text that justified it. Keyword dimensions use two rule
//! tiers (strong → `Yes`, weak → `Partial`); ambiguous language is scored
//! by hedged-sentence density and vague commitments by counting generic
//! assurances that name no concrete mechanism.

mod rules;

use std::collections::{BTreeSet, HashSet};
use std::ops::Range;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

pub use rules::{DimensionRules, DimensionSpec, PatternSpec, Rule, RuleError, RuleFile, RuleSet, RuleTier, Thresholds};

use crate::corpus::AnnotationSet;
use crate::dimension::{DetectionDimension, Verdict, Verdicts};
use crate::text::sentence_spans;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DetectError {
    #[error("dimension {0} is not handled by this detector")]
    UnsupportedDimension(DetectionDimension),
    #[error("text contains no sentences")]
    NoSentences,
    #[error("override for {0} has no matching finding")]
    UnknownDimension(DetectionDimension),
}

/// A matched span of the source text and the rule that matched it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Evidence {
    pub start: usize,
    pub end: usize,
    pub rule_id: String,
}

impl Evidence {
    pub fn range(&self) -> Range<usize> {
        self.start..self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DurationUnit {
    Day,
    Week,
    Month,
    Year,
}

impl DurationUnit {
    fn days(self) -> u32 {
        match self {
            DurationUnit::Day => 1,
            DurationUnit::Week => 7,
            DurationUnit::Month => 30,
            DurationUnit::Year => 365,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FindingDetail {
    Retention { amount: u32, unit: DurationUnit, days: u32 },
    Regulations { names: Vec<String> },
    HedgeDensity { hedged: usize, sentences: usize },
    GenericAssurances { sentences: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub dimension: DetectionDimension,
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<FindingDetail>,
    /// Verdict was set by a reviewer override.
    #[serde(default)]
    pub manual: bool,
}

impl Finding {
    pub fn absent(dimension: DetectionDimension) -> Self {
        Self { dimension, verdict: Verdict::No, evidence: Vec::new(), detail: None, manual: false }
    }

    /// Verdict/evidence coupling: `No` carries no evidence and an automated
    /// `Yes`/`Partial` carries at least one span. Reviewer overrides may
    /// assert a positive verdict without spans.
    pub fn is_coupled(&self) -> bool {
        match self.verdict {
            Verdict::No => self.evidence.is_empty(),
            _ => self.manual || !self.evidence.is_empty(),
        }
    }
}

/// Collapse findings into a verdict vector (missing dimensions read as `No`).
pub fn verdicts_of(findings: &[Finding]) -> Verdicts {
    findings.iter().map(|f| (f.dimension, f.verdict)).collect()
}

fn hits(rules: &[Rule], text: &str) -> Vec<(Range<usize>, usize)> {
    let mut out: Vec<(Range<usize>, usize)> =
        rules.iter().enumerate().flat_map(|(i, r)| r.find_all(text).into_iter().map(move |m| (m, i))).collect();
    out.sort_by_key(|(m, i)| (m.start, m.end, *i));
    out
}

fn to_evidence(rules: &[Rule], found: &[(Range<usize>, usize)]) -> Vec<Evidence> {
    found.iter().map(|(m, i)| Evidence { start: m.start, end: m.end, rule_id: rules[*i].id.clone() }).collect()
}

/// Strong/weak tier evaluation shared by regulation and principle dimensions.
fn tiered(text: &str, dim: DetectionDimension, rules: &RuleSet) -> (Finding, Vec<(Range<usize>, usize)>, bool) {
    let spec = rules.dimension(dim);
    let strong = hits(&spec.strong, text);
    if !strong.is_empty() && strong.len() as f64 >= spec.thresholds.yes {
        let finding = Finding {
            dimension: dim,
            verdict: Verdict::Yes,
            evidence: to_evidence(&spec.strong, &strong),
            detail: None,
            manual: false,
        };
        return (finding, strong, true);
    }
    let weak = hits(&spec.weak, text);
    let mut tier_hits = strong;
    let mut evidence = to_evidence(&spec.strong, &tier_hits);
    evidence.extend(to_evidence(&spec.weak, &weak));
    tier_hits.extend(weak);
    let verdict = if !evidence.is_empty() && evidence.len() as f64 >= spec.thresholds.partial {
        Verdict::Partial
    } else {
        Verdict::No
    };
    if verdict == Verdict::No {
        evidence.clear();
    }
    (Finding { dimension: dim, verdict, evidence, detail: None, manual: false }, tier_hits, false)
}

/// HIPAA, GDPR and other-regulation findings, in that order.
pub fn detect_regulations(text: &str, rules: &RuleSet) -> [Finding; 3] {
    DetectionDimension::REGULATIONS.map(|dim| {
        let (mut finding, _, _) = tiered(text, dim, rules);
        if dim == DetectionDimension::OtherRegulation && finding.verdict != Verdict::No {
            let names: BTreeSet<String> = finding
                .evidence
                .iter()
                .filter_map(|e| rules.rule(&e.rule_id))
                .map(|r| r.display_label().to_string())
                .collect();
            finding.detail = Some(FindingDetail::Regulations { names: names.into_iter().collect() });
        }
        finding
    })
}

/// Keyword-tier detection for one of the eight principle dimensions.
pub fn detect_principle(text: &str, dim: DetectionDimension, rules: &RuleSet) -> Result<Finding, DetectError> {
    if !DetectionDimension::PRINCIPLES.contains(&dim) {
        return Err(DetectError::UnsupportedDimension(dim));
    }
    let (mut finding, _, _) = tiered(text, dim, rules);
    if dim == DetectionDimension::RetentionTime && finding.verdict != Verdict::No {
        finding.detail = finding.evidence.iter().find_map(|e| retention_near(text, e.range()));
    }
    Ok(finding)
}

static DURATION: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(r"(?i)\b({})(?:\s*-\s*|\s+)(?:calendar\s+)?(day|week|month|year)s?\b", rules::NUMBER))
        .expect("duration regex")
});

fn spelled_number(s: &str) -> Option<u32> {
    let n = match s.to_ascii_lowercase().as_str() {
        "one" => 1,
        "two" => 2,
        "three" => 3,
        "four" => 4,
        "five" => 5,
        "six" => 6,
        "seven" => 7,
        "eight" => 8,
        "nine" => 9,
        "ten" => 10,
        "eleven" => 11,
        "twelve" => 12,
        "eighteen" => 18,
        "twenty" => 20,
        "thirty" => 30,
        "sixty" => 60,
        "ninety" => 90,
        digits => return digits.split(['.', ',']).next()?.parse().ok(),
    };
    Some(n)
}

/// Duration stated in the sentence containing `span`.
fn retention_near(text: &str, span: Range<usize>) -> Option<FindingDetail> {
    let sentence = sentence_spans(text).into_iter().find(|s| s.start <= span.start && span.end <= s.end)?;
    let caps = DURATION.captures(&text[sentence])?;
    let amount = spelled_number(&caps[1])?;
    let unit = match caps[2].to_ascii_lowercase().as_str() {
        "day" => DurationUnit::Day,
        "week" => DurationUnit::Week,
        "month" => DurationUnit::Month,
        _ => DurationUnit::Year,
    };
    Some(FindingDetail::Retention { amount, unit, days: amount.saturating_mul(unit.days()) })
}

/// Hedged-sentence density. `Partial` at or above the partial threshold,
/// `Yes` at or above the yes threshold.
pub fn detect_ambiguity(text: &str, rules: &RuleSet) -> Result<Finding, DetectError> {
    let dim = DetectionDimension::AmbiguousLanguage;
    let spec = rules.dimension(dim);
    let sentences = sentence_spans(text);
    if sentences.is_empty() {
        return Err(DetectError::NoSentences);
    }
    let hedge_rules: Vec<&Rule> = spec.positive().collect();
    let evidence: Vec<Evidence> = sentences
        .iter()
        .filter_map(|s| {
            hedge_rules.iter().find(|r| r.is_match(&text[s.clone()])).map(|r| Evidence {
                start: s.start,
                end: s.end,
                rule_id: r.id.clone(),
            })
        })
        .collect();
    let density = evidence.len() as f64 / sentences.len() as f64;
    let verdict = if density >= spec.thresholds.yes {
        Verdict::Yes
    } else if density >= spec.thresholds.partial {
        Verdict::Partial
    } else {
        Verdict::No
    };
    let hedged = evidence.len();
    Ok(Finding {
        dimension: dim,
        verdict,
        evidence: if verdict == Verdict::No { Vec::new() } else { evidence },
        detail: Some(FindingDetail::HedgeDensity { hedged, sentences: sentences.len() }),
        manual: false,
    })
}

/// Generic security assurances with no concrete mechanism named in the same
/// sentence. Counted over distinct sentences.
pub fn detect_vague_commitments(text: &str, rules: &RuleSet) -> Finding {
    let dim = DetectionDimension::VagueCommitments;
    let spec = rules.dimension(dim);
    let mut seen = HashSet::new();
    let evidence: Vec<Evidence> = sentence_spans(text)
        .into_iter()
        .filter_map(|s| {
            let sentence = &text[s.clone()];
            if spec.exclude.iter().any(|x| x.is_match(sentence)) {
                return None;
            }
            let rule = spec.positive().find(|r| r.is_match(sentence))?;
            let key = sentence.to_lowercase().split_whitespace().collect::<Vec<_>>().join(" ");
            seen.insert(key).then(|| Evidence { start: s.start, end: s.end, rule_id: rule.id.clone() })
        })
        .collect();
    let count = evidence.len() as f64;
    let verdict = if count >= spec.thresholds.yes {
        Verdict::Yes
    } else if count >= spec.thresholds.partial {
        Verdict::Partial
    } else {
        Verdict::No
    };
    let sentences = evidence.len();
    Finding {
        dimension: dim,
        verdict,
        evidence: if verdict == Verdict::No { Vec::new() } else { evidence },
        detail: (sentences > 0).then_some(FindingDetail::GenericAssurances { sentences }),
        manual: false,
    }
}

/// All thirteen findings in dimension order.
pub fn detect_all(text: &str, rules: &RuleSet) -> Result<Vec<Finding>, DetectError> {
    let mut out: Vec<Finding> = detect_regulations(text, rules).into_iter().collect();
    for dim in DetectionDimension::ALL.into_iter().skip(3) {
        let finding = match dim {
            DetectionDimension::AmbiguousLanguage => detect_ambiguity(text, rules)?,
            DetectionDimension::VagueCommitments => detect_vague_commitments(text, rules),
            _ => detect_principle(text, dim, rules)?,
        };
        out.push(finding);
    }
    Ok(out)
}

/// Replaces overridden verdicts and flags them as manual. An override to
/// `No` drops the finding's evidence and detail.
pub fn apply_overrides(mut findings: Vec<Finding>, annotations: &AnnotationSet) -> Result<Vec<Finding>, DetectError> {
    for (&dim, &verdict) in &annotations.overrides {
        let finding = findings.iter_mut().find(|f| f.dimension == dim).ok_or(DetectError::UnknownDimension(dim))?;
        finding.verdict = verdict;
        finding.manual = true;
        if verdict == Verdict::No {
            finding.evidence.clear();
            finding.detail = None;
        }
    }
    Ok(findings)
}
