//! Rule file loading and pattern compilation.
//!
//! A pattern is a whitespace-separated sequence of tokens, matched
//! case-insensitively at word boundaries and never across a sentence
//! terminator:
//!
//! * `word` matches literally; `word*` matches any word with that prefix;
//! * `a|b*|c` matches any one of the alternatives;
//! * `#` matches a number (digits or a spelled-out number);
//! * `~N` allows up to `N` arbitrary words between its neighbours.
//!
//! Consecutive tokens may be separated by any run of spaces or punctuation
//! other than `.`, `!`, `?` and newline, so `third party` also matches
//! `third-party`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::dimension::DetectionDimension;

const DEFAULT_RULES: &str = include_str!("../../rules/default_rules.json");

const SEP: &str = r"[^\w.!?\n]+";
const GAP_WORD: &str = r"[\w'’]+";
pub(crate) const NUMBER: &str = r"(?:\d+(?:[.,]\d+)?|one|two|three|four|five|six|seven|eight|nine|ten|eleven|twelve|eighteen|twenty|thirty|sixty|ninety)";

#[derive(Debug, thiserror::Error)]
pub enum RuleError {
    #[error("rules file not found: {0}")]
    MissingFile(PathBuf),
    #[error("cannot read rules file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid rules file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("rules file has no entry for dimension {0}")]
    MissingDimension(DetectionDimension),
    #[error("dimension {0} has no strong or weak rules")]
    EmptyDimension(DetectionDimension),
    #[error("rule {rule_id} (`{pattern}`) does not compile: {message}")]
    BadPattern { rule_id: String, pattern: String, message: String },
    #[error("dimension {dimension}: thresholds must satisfy 0 < partial <= yes, got {partial} / {yes}")]
    BadThresholds { dimension: DetectionDimension, partial: f64, yes: f64 },
}

/// `partial`/`yes` cut-offs. For keyword dimensions they are hit counts; for
/// ambiguous language a hedged-sentence density; for vague commitments a
/// count of distinct generic-assurance sentences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub partial: f64,
    pub yes: f64,
}

impl Thresholds {
    pub fn default_for(dim: DetectionDimension) -> Self {
        match dim {
            DetectionDimension::AmbiguousLanguage => Thresholds { partial: 0.15, yes: 0.35 },
            DetectionDimension::VagueCommitments => Thresholds { partial: 1.0, yes: 3.0 },
            _ => Thresholds { partial: 1.0, yes: 1.0 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PatternSpec {
    Plain(String),
    Labeled { pattern: String, label: String },
}

impl PatternSpec {
    fn parts(&self) -> (&str, Option<&str>) {
        match self {
            PatternSpec::Plain(p) => (p, None),
            PatternSpec::Labeled { pattern, label } => (pattern, Some(label)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionSpec {
    #[serde(default)]
    pub strong: Vec<PatternSpec>,
    #[serde(default)]
    pub weak: Vec<PatternSpec>,
    /// Sentence-level vetoes (used by vague-commitment detection for
    /// concrete mechanism terms).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exclude: Vec<PatternSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Thresholds>,
}

/// Serialized form of a rule file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleFile {
    pub dimensions: BTreeMap<DetectionDimension, DimensionSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleTier {
    Strong,
    Weak,
    Exclude,
}

impl RuleTier {
    fn tag(self) -> &'static str {
        match self {
            RuleTier::Strong => "s",
            RuleTier::Weak => "w",
            RuleTier::Exclude => "x",
        }
    }
}

/// A compiled pattern. Its id is `<dimension>.<tier><index>`, e.g.
/// `data_encryption.s0` for the first strong encryption rule.
#[derive(Debug, Clone)]
pub struct Rule {
    pub id: String,
    pub dimension: DetectionDimension,
    pub tier: RuleTier,
    pub pattern: String,
    pub label: Option<String>,
    regex: Regex,
}

impl Rule {
    pub fn compile(
        dimension: DetectionDimension,
        tier: RuleTier,
        index: usize,
        pattern: &str,
        label: Option<&str>,
    ) -> Result<Self, RuleError> {
        let id = format!("{}.{}{}", dimension.key(), tier.tag(), index);
        let bad =
            |message: String| RuleError::BadPattern { rule_id: id.clone(), pattern: pattern.to_string(), message };
        let source = pattern_to_regex(pattern).map_err(bad)?;
        let regex = Regex::new(&source).map_err(|e| bad(e.to_string()))?;
        Ok(Self { id, dimension, tier, pattern: pattern.to_string(), label: label.map(str::to_string), regex })
    }

    pub fn find_all(&self, text: &str) -> Vec<Range<usize>> {
        self.regex.find_iter(text).map(|m| m.range()).collect()
    }

    pub fn is_match(&self, text: &str) -> bool {
        self.regex.is_match(text)
    }

    /// True when the rule matches `text` exactly, start to end.
    pub fn matches_whole(&self, text: &str) -> bool {
        self.regex.find(text).is_some_and(|m| m.start() == 0 && m.end() == text.len())
    }

    /// Label for reporting: the explicit label, else the pattern text.
    pub fn display_label(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.pattern)
    }
}

enum Token {
    Word(Vec<String>),
    Number,
    Gap(usize),
}

fn pattern_to_regex(pattern: &str) -> Result<String, String> {
    let mut tokens = Vec::new();
    for raw in pattern.split_whitespace() {
        if raw == "#" {
            tokens.push(Token::Number);
        } else if let Some(n) = raw.strip_prefix('~') {
            let n = n.parse::<usize>().map_err(|_| format!("bad gap token `{raw}`"))?;
            tokens.push(Token::Gap(n));
        } else {
            let alts = raw.split('|').map(str::to_string).collect::<Vec<_>>();
            if alts.iter().any(String::is_empty) {
                return Err(format!("empty alternative in `{raw}`"));
            }
            tokens.push(Token::Word(alts));
        }
    }
    match (tokens.first(), tokens.last()) {
        (None, _) => return Err("empty pattern".into()),
        (Some(Token::Gap(_)), _) | (_, Some(Token::Gap(_))) => {
            return Err("pattern cannot start or end with a gap".into())
        }
        _ => {}
    }
    let mut out = String::from("(?i)");
    let mut pending_gap: Option<usize> = None;
    let mut first = true;
    for token in &tokens {
        let piece = match token {
            Token::Gap(n) => {
                if pending_gap.is_some() {
                    return Err("consecutive gaps".into());
                }
                pending_gap = Some(*n);
                continue;
            }
            Token::Number => format!(r"\b{NUMBER}\b"),
            Token::Word(alts) => {
                let compiled = alts.iter().map(|a| compile_alt(a)).collect::<Result<Vec<_>, _>>()?;
                format!("(?:{})", compiled.join("|"))
            }
        };
        if !first {
            if let Some(n) = pending_gap.take() {
                out.push_str(&format!("(?:{SEP}{GAP_WORD}){{0,{n}}}"));
            }
            out.push_str(SEP);
        }
        out.push_str(&piece);
        first = false;
    }
    Ok(out)
}

fn compile_alt(alt: &str) -> Result<String, String> {
    let (literal, wildcard) = match alt.strip_suffix('*') {
        Some(prefix) => (prefix, true),
        None => (alt, false),
    };
    if literal.is_empty() || literal.contains('*') {
        return Err(format!("wildcard `*` is only allowed at the end of a word: `{alt}`"));
    }
    let is_word = |c: char| c.is_alphanumeric() || c == '_';
    let mut out = String::new();
    if literal.chars().next().is_some_and(is_word) {
        out.push_str(r"\b");
    }
    for c in literal.chars() {
        if c == '\'' || c == '’' {
            out.push_str("['’]");
        } else {
            out.push_str(&regex::escape(&c.to_string()));
        }
    }
    if wildcard {
        out.push_str(r"\w*");
    } else if literal.chars().last().is_some_and(is_word) {
        out.push_str(r"\b");
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct DimensionRules {
    pub strong: Vec<Rule>,
    pub weak: Vec<Rule>,
    pub exclude: Vec<Rule>,
    pub thresholds: Thresholds,
}

impl DimensionRules {
    /// Strong then weak rules.
    pub fn positive(&self) -> impl Iterator<Item = &Rule> {
        self.strong.iter().chain(&self.weak)
    }
}

/// Immutable, validated set of compiled rules for all thirteen dimensions.
#[derive(Clone)]
pub struct RuleSet {
    dims: BTreeMap<DetectionDimension, DimensionRules>,
}

impl fmt::Debug for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: BTreeMap<_, _> =
            self.dims.iter().map(|(d, r)| (d.key(), r.strong.len() + r.weak.len() + r.exclude.len())).collect();
        f.debug_struct("RuleSet").field("rules", &counts).finish()
    }
}

impl RuleSet {
    /// The built-in rule set.
    pub fn default_rules() -> Self {
        static BUILT_IN: LazyLock<RuleSet> =
            LazyLock::new(|| RuleSet::from_json(DEFAULT_RULES).expect("built-in rules are valid"));
        BUILT_IN.clone()
    }

    pub fn default_rules_json() -> &'static str {
        DEFAULT_RULES
    }

    pub fn load(path: &Path) -> Result<Self, RuleError> {
        let text = std::fs::read_to_string(path).map_err(|source| match source.kind() {
            std::io::ErrorKind::NotFound => RuleError::MissingFile(path.to_path_buf()),
            _ => RuleError::Io { path: path.to_path_buf(), source },
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, RuleError> {
        let file: RuleFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &RuleFile) -> Result<Self, RuleError> {
        let mut dims = BTreeMap::new();
        for dim in DetectionDimension::ALL {
            let spec = file.dimensions.get(&dim).ok_or(RuleError::MissingDimension(dim))?;
            if spec.strong.is_empty() && spec.weak.is_empty() {
                return Err(RuleError::EmptyDimension(dim));
            }
            let compile = |tier: RuleTier, specs: &[PatternSpec]| {
                specs
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        let (pattern, label) = s.parts();
                        Rule::compile(dim, tier, i, pattern, label)
                    })
                    .collect::<Result<Vec<_>, _>>()
            };
            let thresholds = spec.thresholds.unwrap_or_else(|| Thresholds::default_for(dim));
            if !(thresholds.partial > 0.0 && thresholds.partial <= thresholds.yes) {
                return Err(RuleError::BadThresholds {
                    dimension: dim,
                    partial: thresholds.partial,
                    yes: thresholds.yes,
                });
            }
            dims.insert(
                dim,
                DimensionRules {
                    strong: compile(RuleTier::Strong, &spec.strong)?,
                    weak: compile(RuleTier::Weak, &spec.weak)?,
                    exclude: compile(RuleTier::Exclude, &spec.exclude)?,
                    thresholds,
                },
            );
        }
        Ok(Self { dims })
    }

    pub fn dimension(&self, dim: DetectionDimension) -> &DimensionRules {
        &self.dims[&dim]
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.dims.values().flat_map(|d| d.strong.iter().chain(&d.weak).chain(&d.exclude)).find(|r| r.id == id)
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.dims.values().flat_map(|d| d.strong.iter().chain(&d.weak).chain(&d.exclude))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(p: &str) -> Rule {
        Rule::compile(DetectionDimension::DataEncryption, RuleTier::Strong, 0, p, None).unwrap()
    }

    #[test]
    fn literal_and_wildcard() {
        let r = rule("encrypt*");
        assert!(r.is_match("Data is Encrypted at rest"));
        assert!(!r.is_match("decrypt"));
        let r = rule("third party");
        assert!(r.is_match("third-party vendors"));
        assert!(r.is_match("Third  Party"));
        assert!(!r.is_match("thirdparty"));
    }

    #[test]
    fn gaps_and_alternatives() {
        let r = rule("encrypt* ~4 ssl|tls");
        assert!(r.is_match("transactions will be encrypted using SSL"));
        assert!(r.is_match("encrypted with TLS"));
        assert!(!r.is_match("encrypted with one two three four five SSL"));
        assert!(!r.is_match("we encrypt data. SSL is used"), "gaps never cross a sentence end");
    }

    #[test]
    fn numbers() {
        let r = rule("retain* ~6 # year*");
        assert!(r.is_match("we retain your records for 5 years"));
        assert!(r.is_match("We retain records for five years"));
        assert!(!r.is_match("we retain your records for years"));
    }

    #[test]
    fn apostrophes_match_both_forms() {
        let r = rule("children's");
        assert!(r.is_match("children's data"));
        assert!(r.is_match("children’s data"));
    }

    #[test]
    fn bad_patterns() {
        for p in ["", "~3 data", "data ~3", "data ~x cell", "da*ta", "a||b", "data ~1 ~2 cell"] {
            assert!(Rule::compile(DetectionDimension::DataEncryption, RuleTier::Strong, 0, p, None).is_err(), "{p:?}");
        }
    }

    #[test]
    fn rule_ids() {
        let rules = RuleSet::default_rules();
        let enc = rules.dimension(DetectionDimension::DataEncryption);
        assert_eq!(enc.strong[0].id, "data_encryption.s0");
        assert_eq!(enc.weak[0].id, "data_encryption.w0");
        assert!(rules.rule("data_encryption.s0").is_some());
    }

    #[test]
    fn every_dimension_has_rules() {
        let rules = RuleSet::default_rules();
        for d in DetectionDimension::ALL {
            assert!(rules.dimension(d).positive().count() >= 1, "{d}");
        }
    }

    #[test]
    fn missing_dimension_rejected() {
        let mut file: RuleFile = serde_json::from_str(RuleSet::default_rules_json()).unwrap();
        file.dimensions.remove(&DetectionDimension::BreachProtocol);
        assert!(matches!(
            RuleSet::from_file(&file),
            Err(RuleError::MissingDimension(DetectionDimension::BreachProtocol))
        ));
        let mut file: RuleFile = serde_json::from_str(RuleSet::default_rules_json()).unwrap();
        file.dimensions.get_mut(&DetectionDimension::BreachProtocol).unwrap().strong.clear();
        file.dimensions.get_mut(&DetectionDimension::BreachProtocol).unwrap().weak.clear();
        assert!(matches!(RuleSet::from_file(&file), Err(RuleError::EmptyDimension(_))));
    }
}
