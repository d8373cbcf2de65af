//! Codebook of audited apps: pseudonymous identity, usage category,
//! policy location and the reviewer annotations that override automated
//! verdicts.
//!
//! The codebook is persisted as a single JSON document with top-level keys
//! `records` and `annotations`. Codebook values are immutable once loaded;
//! the only mutation path is a whole-file [`save_codebook`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::dimension::{DetectionDimension, Verdict};

/// Opaque app label: one ASCII letter followed by a positive integer (`A1`, `A28`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Pseudonym {
    prefix: char,
    number: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid pseudonym `{0}`: expected a letter followed by a positive integer")]
pub struct InvalidPseudonym(pub String);

impl Pseudonym {
    pub fn new(prefix: char, number: u32) -> Result<Self, InvalidPseudonym> {
        if !prefix.is_ascii_alphabetic() || number == 0 {
            return Err(InvalidPseudonym(format!("{prefix}{number}")));
        }
        Ok(Self { prefix, number })
    }

    pub fn number(&self) -> u32 {
        self.number
    }
}

impl FromStr for Pseudonym {
    type Err = InvalidPseudonym;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || InvalidPseudonym(s.to_string());
        let mut chars = s.chars();
        let prefix = chars.next().filter(char::is_ascii_alphabetic).ok_or_else(bad)?;
        let digits = chars.as_str();
        if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let number = digits.parse::<u32>().map_err(|_| bad())?;
        Pseudonym::new(prefix, number).map_err(|_| bad())
    }
}

impl TryFrom<String> for Pseudonym {
    type Error = InvalidPseudonym;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<Pseudonym> for String {
    fn from(p: Pseudonym) -> String {
        p.to_string()
    }
}

impl fmt::Display for Pseudonym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.prefix, self.number)
    }
}

// Natural order: A2 < A10.
impl Ord for Pseudonym {
    fn cmp(&self, other: &Self) -> Ordering {
        self.prefix.cmp(&other.prefix).then(self.number.cmp(&other.number))
    }
}

impl PartialOrd for Pseudonym {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An app's real name. `Debug` and `Display` print `[redacted]`; call
/// [`RealName::reveal`] to obtain the underlying text.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealName(String);

impl RealName {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    pub fn reveal(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for RealName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("RealName([redacted])")
    }
}

impl fmt::Display for RealName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[redacted]")
    }
}

/// Usage category of an audited app.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AppCategory {
    Telehealth,
    SeniorCareCaregiverSupport,
    EldercareWellbeingSupport,
    HealthMonitoringSafety,
    HealthcareServices,
    FitnessSupport,
}

impl AppCategory {
    pub const ALL: [AppCategory; 6] = [
        Self::Telehealth,
        Self::SeniorCareCaregiverSupport,
        Self::EldercareWellbeingSupport,
        Self::HealthMonitoringSafety,
        Self::HealthcareServices,
        Self::FitnessSupport,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Self::Telehealth => "telehealth",
            Self::SeniorCareCaregiverSupport => "senior_care_caregiver_support",
            Self::EldercareWellbeingSupport => "eldercare_wellbeing_support",
            Self::HealthMonitoringSafety => "health_monitoring_safety",
            Self::HealthcareServices => "healthcare_services",
            Self::FitnessSupport => "fitness_support",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Telehealth => "Telehealth",
            Self::SeniorCareCaregiverSupport => "Senior care & Caregiver Support",
            Self::EldercareWellbeingSupport => "Eldercare & Well-being Support",
            Self::HealthMonitoringSafety => "Health Monitoring & Safety",
            Self::HealthcareServices => "Healthcare Services",
            Self::FitnessSupport => "Fitness Support",
        }
    }
}

impl FromStr for AppCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.key() == s || c.label() == s)
            .ok_or_else(|| format!("unknown app category `{s}`"))
    }
}

impl fmt::Display for AppCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StoreSource {
    AppleStore,
    GooglePlay,
    Other,
}

/// One audited app.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppRecord {
    pub pseudonym: Pseudonym,
    pub real_name: Option<RealName>,
    pub category: AppCategory,
    pub policy_url: Option<String>,
    pub store_source: StoreSource,
}

/// Reviewer-asserted accessibility of the policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnotatedStatus {
    Accessible,
    Inaccessible,
}

/// Manual review results for one app. Every override fully replaces the
/// automated verdict for its dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnotationSet {
    pub app: Pseudonym,
    #[serde(default)]
    pub overrides: BTreeMap<DetectionDimension, Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy_status: Option<AnnotatedStatus>,
    /// Reviewer-measured SMOG grade; replaces the computed grade.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smog_grade: Option<f64>,
    #[serde(default)]
    pub reviewer_note: String,
    pub timestamp: DateTime<Utc>,
}

impl AnnotationSet {
    pub fn new(app: Pseudonym, timestamp: DateTime<Utc>) -> Self {
        Self {
            app,
            overrides: BTreeMap::new(),
            policy_status: None,
            smog_grade: None,
            reviewer_note: String::new(),
            timestamp,
        }
    }

    /// True when the annotations alone determine a full assessment: every
    /// dimension is overridden and the policy status (plus the grade, for an
    /// accessible policy) is given.
    pub fn is_complete(&self) -> bool {
        let all_dims = DetectionDimension::ALL.iter().all(|d| self.overrides.contains_key(d));
        match self.policy_status {
            Some(AnnotatedStatus::Inaccessible) => true,
            Some(AnnotatedStatus::Accessible) => all_dims && self.smog_grade.is_some(),
            None => false,
        }
    }

    /// Folds `later` on top of `self`; later values win.
    pub fn merged_with(&self, later: &AnnotationSet) -> AnnotationSet {
        let mut merged = self.clone();
        merged.overrides.extend(later.overrides.iter().map(|(d, v)| (*d, *v)));
        merged.policy_status = later.policy_status.or(self.policy_status);
        merged.smog_grade = later.smog_grade.or(self.smog_grade);
        if !later.reviewer_note.is_empty() {
            merged.reviewer_note = later.reviewer_note.clone();
        }
        merged.timestamp = later.timestamp.max(self.timestamp);
        merged
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Codebook {
    pub records: Vec<AppRecord>,
    #[serde(default)]
    pub annotations: Vec<AnnotationSet>,
}

/// Where in a codebook file a problem was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Locator {
    Position { line: usize, column: usize },
    Record { index: usize, pseudonym: String },
    Annotation { index: usize, app: String },
}

impl fmt::Display for Locator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locator::Position { line, column } => write!(f, "line {line}, column {column}"),
            Locator::Record { index, pseudonym } => write!(f, "record #{index} ({pseudonym})"),
            Locator::Annotation { index, app } => write!(f, "annotation #{index} ({app})"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("codebook file not found: {0}")]
    MissingFile(PathBuf),
    #[error("malformed codebook at {locator}: {message}")]
    MalformedCodebook { locator: Locator, message: String },
    #[error("cannot write codebook to {path}: {source}")]
    IoFailure {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Codebook {
    /// Parses and validates a codebook from its JSON text.
    pub fn from_json(text: &str) -> Result<Self, CorpusError> {
        let codebook: Codebook = serde_json::from_str(text).map_err(|e| CorpusError::MalformedCodebook {
            locator: Locator::Position { line: e.line(), column: e.column() },
            message: e.to_string(),
        })?;
        codebook.validate()?;
        Ok(codebook)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("codebook serializes");
        out.push('\n');
        out
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let mut seen = HashSet::new();
        for (index, rec) in self.records.iter().enumerate() {
            if !seen.insert(&rec.pseudonym) {
                return Err(CorpusError::MalformedCodebook {
                    locator: Locator::Record { index, pseudonym: rec.pseudonym.to_string() },
                    message: format!("duplicate pseudonym {}", rec.pseudonym),
                });
            }
        }
        for (index, ann) in self.annotations.iter().enumerate() {
            let locator = || Locator::Annotation { index, app: ann.app.to_string() };
            if !seen.contains(&ann.app) {
                return Err(CorpusError::MalformedCodebook {
                    locator: locator(),
                    message: format!("annotation references unknown app {}", ann.app),
                });
            }
            if let Some(g) = ann.smog_grade {
                if !g.is_finite() || g < 0.0 {
                    return Err(CorpusError::MalformedCodebook {
                        locator: locator(),
                        message: format!("smog_grade must be a non-negative number, got {g}"),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn record(&self, app: &Pseudonym) -> Option<&AppRecord> {
        self.records.iter().find(|r| &r.pseudonym == app)
    }

    /// All annotation sets for `app`, merged in file order.
    pub fn annotations_for(&self, app: &Pseudonym) -> Option<AnnotationSet> {
        self.annotations.iter().filter(|a| &a.app == app).fold(None, |acc: Option<AnnotationSet>, a| {
            Some(match acc {
                Some(prev) => prev.merged_with(a),
                None => a.clone(),
            })
        })
    }

    /// Real names of all records, for redaction scans.
    pub fn real_names(&self) -> impl Iterator<Item = &str> {
        self.records.iter().filter_map(|r| r.real_name.as_ref().map(RealName::reveal))
    }
}

pub fn load_codebook(path: &Path) -> Result<Codebook, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CorpusError::MissingFile(path.to_path_buf()),
        _ => {
            CorpusError::MalformedCodebook { locator: Locator::Position { line: 0, column: 0 }, message: e.to_string() }
        }
    })?;
    Codebook::from_json(&text)
}

/// Writes the codebook atomically (temp file in the destination directory, then rename).
pub fn save_codebook(codebook: &Codebook, path: &Path) -> Result<(), CorpusError> {
    write_atomic(path, codebook.to_json().as_bytes())
        .map_err(|source| CorpusError::IoFailure { path: path.to_path_buf(), source })
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// An app entry before pseudonymization.
#[derive(Debug, Clone, PartialEq)]
pub struct RawAppEntry {
    pub real_name: String,
    pub category: AppCategory,
    pub policy_url: Option<String>,
    pub store_source: StoreSource,
}

/// Labels entries `A1..An` in input order.
pub fn assign_pseudonyms(entries: Vec<RawAppEntry>) -> Codebook {
    let records = entries
        .into_iter()
        .zip(1u32..)
        .map(|(e, n)| AppRecord {
            pseudonym: Pseudonym::new('A', n).expect("positive index"),
            real_name: Some(RealName::new(e.real_name)),
            category: e.category,
            policy_url: e.policy_url,
            store_source: e.store_source,
        })
        .collect();
    Codebook { records, annotations: Vec::new() }
}
