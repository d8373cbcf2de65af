//! Regression check of recomputed assessments against transcribed expectations.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::assess::AppAssessment;
use crate::corpus::Pseudonym;
use crate::dimension::{DetectionDimension, Verdict};
use crate::readability::{band, ReadabilityBand};
use crate::report::{summarize, CorpusSummary};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedScores {
    pub regulatory: u8,
    pub security: u8,
    pub usability: u8,
    pub min_retention: u8,
    pub third_party: u8,
    pub overall: u8,
}

impl ExpectedScores {
    fn columns(&self) -> [(&'static str, u8); 6] {
        [
            ("regulatory", self.regulatory),
            ("security", self.security),
            ("usability", self.usability),
            ("min_retention", self.min_retention),
            ("third_party", self.third_party),
            ("overall", self.overall),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedApp {
    pub app: Pseudonym,
    pub verdicts: BTreeMap<DetectionDimension, Verdict>,
    pub smog_grade: Option<f64>,
    pub level: Option<ReadabilityBand>,
    pub scores: ExpectedScores,
}

/// A published cell known to disagree with the rubric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Waiver {
    pub app: Pseudonym,
    pub column: String,
    pub published: u8,
    pub rubric: u8,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedExtreme {
    pub value: u8,
    pub apps: Vec<Pseudonym>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub mean: f64,
    pub sd: f64,
    pub usability_sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedSummary {
    pub counts: BTreeMap<String, usize>,
    pub means: BTreeMap<String, f64>,
    pub sds: BTreeMap<String, f64>,
    pub tolerance: Tolerance,
    pub smog_mean: f64,
    pub smog_tolerance: f64,
    pub overall_min: ExpectedExtreme,
    pub overall_max: ExpectedExtreme,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedTable {
    pub apps: Vec<ExpectedApp>,
    #[serde(default)]
    pub waivers: Vec<Waiver>,
    pub summary: ExpectedSummary,
}

#[derive(Debug, thiserror::Error)]
pub enum ExpectedError {
    #[error("expectations file not found: {0}")]
    Missing(PathBuf),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid expectations file: {0}")]
    Parse(#[from] serde_json::Error),
}

impl ExpectedTable {
    pub fn load(path: &Path) -> Result<Self, ExpectedError> {
        if !path.is_file() {
            return Err(ExpectedError::Missing(path.to_path_buf()));
        }
        let text =
            std::fs::read_to_string(path).map_err(|source| ExpectedError::Io { path: path.to_path_buf(), source })?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Waived,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub subject: String,
    pub column: String,
    pub expected: String,
    pub actual: String,
    pub status: CheckStatus,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn count(&self, status: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match c.status {
                CheckStatus::Pass => {}
                CheckStatus::Fail => writeln!(f, "FAIL   {} {}: {} != {}", c.subject, c.column, c.actual, c.expected)?,
                CheckStatus::Waived => writeln!(
                    f,
                    "WAIVED {} {}: computed {}, published {} ({})",
                    c.subject, c.column, c.actual, c.expected, c.note
                )?,
            }
        }
        writeln!(
            f,
            "{} checks: {} passed, {} waived, {} failed",
            self.checks.len(),
            self.count(CheckStatus::Pass),
            self.count(CheckStatus::Waived),
            self.count(CheckStatus::Fail)
        )
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, subject: &str, column: &str, expected: String, actual: String, ok: bool) {
        self.0.push(Check {
            subject: subject.to_string(),
            column: column.to_string(),
            expected,
            actual,
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            note: String::new(),
        });
    }

    fn exact<T: PartialEq + fmt::Display>(&mut self, subject: &str, column: &str, expected: T, actual: T) {
        let ok = expected == actual;
        self.push(subject, column, expected.to_string(), actual.to_string(), ok);
    }

    fn near(&mut self, subject: &str, column: &str, expected: f64, actual: f64, tol: f64) {
        let ok = (expected - actual).abs() <= tol;
        self.push(subject, column, format!("{expected}±{tol}"), format!("{actual:.4}"), ok);
    }
}

fn join(apps: &[Pseudonym]) -> String {
    apps.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Compare per-app cells and corpus statistics.
pub fn verify(assessments: &[AppAssessment], expected: &ExpectedTable) -> VerifyReport {
    let mut checks = Checks(Vec::new());
    for exp in &expected.apps {
        let subject = exp.app.to_string();
        let Some(a) = assessments.iter().find(|a| a.app == exp.app) else {
            checks.push(&subject, "present", "yes".into(), "no".into(), false);
            continue;
        };
        for (&dim, &v) in &exp.verdicts {
            checks.exact(&subject, dim.key(), v, a.finding(dim).verdict);
        }
        let grade = a.readability.as_ref().map(|r| r.smog_grade);
        match (exp.smog_grade, grade) {
            (Some(e), Some(g)) => checks.near(&subject, "smog_grade", e, g, 1e-9),
            (e, g) => checks.exact(&subject, "smog_grade", format!("{e:?}"), format!("{g:?}")),
        }
        let level = grade.map(band);
        checks.exact(&subject, "level", exp.level.map_or("-", |b| b.code()), level.map_or("-", |b| b.code()));
        let actual = a.profile.elements();
        let actual = [actual[0], actual[1], actual[2], actual[3], actual[4], a.profile.overall];
        for ((column, published), got) in exp.scores.columns().into_iter().zip(actual) {
            let waiver = expected.waivers.iter().find(|w| w.app == exp.app && w.column == column);
            match waiver {
                Some(w) if w.published == published && got == w.rubric => checks.0.push(Check {
                    subject: subject.clone(),
                    column: column.to_string(),
                    expected: published.to_string(),
                    actual: got.to_string(),
                    status: CheckStatus::Waived,
                    note: w.note.clone(),
                }),
                Some(w) => checks.exact(&subject, column, w.rubric, got),
                None => checks.exact(&subject, column, published, got),
            }
        }
    }
    checks.exact("corpus", "apps", expected.apps.len(), assessments.len());

    match summarize(assessments) {
        Ok(s) => check_summary(&mut checks, &s, &expected.summary),
        Err(e) => checks.push("corpus", "summary", "available".into(), e.to_string(), false),
    }
    VerifyReport { checks: checks.0 }
}

fn check_summary(checks: &mut Checks, s: &CorpusSummary, e: &ExpectedSummary) {
    let counts = [
        ("hipaa", s.hipaa.count),
        ("gdpr", s.gdpr.count),
        ("other_regulation", s.other_regulation.count),
        ("no_regulation", s.no_regulation.count),
        ("encryption", s.encryption.count),
        ("access_controls", s.access_control.count),
        ("breach", s.breach_protocol.count),
        ("minimization", s.minimization.count),
        ("retention", s.retention.count),
        ("consent", s.consent.count),
        ("third_party", s.third_party.count),
    ];
    for (name, actual) in counts {
        if let Some(&exp) = e.counts.get(name) {
            checks.exact("corpus", &format!("count.{name}"), exp, actual);
        }
    }
    let stats = [
        ("regulatory", &s.regulatory),
        ("security", &s.security),
        ("usability", &s.usability),
        ("min_retention", &s.min_retention),
        ("third_party", &s.third_party_score),
        ("overall", &s.overall),
    ];
    for (name, stat) in stats {
        if let Some(&m) = e.means.get(name) {
            checks.near("corpus", &format!("mean.{name}"), m, stat.mean, e.tolerance.mean);
        }
        if let Some(&sd) = e.sds.get(name) {
            let tol = if name == "usability" { e.tolerance.usability_sd } else { e.tolerance.sd };
            checks.near("corpus", &format!("sd.{name}"), sd, stat.sd, tol);
        }
    }
    match s.smog_mean {
        Some(m) => checks.near("corpus", "smog_mean", e.smog_mean, m, e.smog_tolerance),
        None => checks.push("corpus", "smog_mean", e.smog_mean.to_string(), "none".into(), false),
    }
    for (column, exp, actual) in
        [("overall_min", &e.overall_min, &s.overall_min), ("overall_max", &e.overall_max, &s.overall_max)]
    {
        let expected = format!("{} ({})", exp.value, join(&exp.apps));
        let got = actual.as_ref().map_or("none".to_string(), |x| format!("{} ({})", x.score, join(&x.apps)));
        checks.exact("corpus", column, expected, got);
    }
}

/// Per-check table for writing alongside the console summary.
pub fn render_checks(report: &VerifyReport) -> String {
    let mut out = String::from("subject\tcolumn\texpected\tactual\tstatus\n");
    for c in &report.checks {
        let status = match c.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Waived => "waived",
        };
        let _ = writeln!(out, "{}\t{}\t{}\t{}\t{status}", c.subject, c.column, c.expected, c.actual);
    }
    out
}
