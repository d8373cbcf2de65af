//! Per-app pipeline: detect, override, grade, score.

use serde::{Deserialize, Serialize};

use crate::corpus::{AnnotatedStatus, AnnotationSet, AppCategory, AppRecord, Pseudonym};
use crate::detect::{apply_overrides, detect_all, verdicts_of, DetectError, Finding, RuleSet};
use crate::dimension::{DetectionDimension, Verdicts};
use crate::ingest::{PolicyDocument, PolicyStatus};
use crate::readability::{smog_grade, ReadabilityError, ReadabilityResult};
use crate::score::{score_app, PolicyAccess, PrafProfile, ScoreError, ScoringInput};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AssessError {
    #[error("{0}: no usable policy document and annotations are incomplete")]
    Incomplete(Pseudonym),
    #[error("{app}: {source}")]
    Detect { app: Pseudonym, source: DetectError },
    #[error("{app}: {source}")]
    Readability { app: Pseudonym, source: ReadabilityError },
    #[error("{app}: {source}")]
    Score { app: Pseudonym, source: ScoreError },
    #[error("{app}: finding for {dimension} violates verdict/evidence coupling")]
    Coupling { app: Pseudonym, dimension: DetectionDimension },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppAssessment {
    pub app: Pseudonym,
    pub category: AppCategory,
    pub access: PolicyAccess,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inaccessible_reason: Option<String>,
    /// Final findings in dimension order, overrides applied.
    pub findings: Vec<Finding>,
    /// Detector verdicts before overrides, when a text was analyzed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detected: Option<Verdicts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub readability: Option<ReadabilityResult>,
    pub profile: PrafProfile,
    /// Analyzed text; evidence offsets index into it.
    #[serde(skip)]
    pub text: Option<String>,
}

impl AppAssessment {
    pub fn verdicts(&self) -> Verdicts {
        verdicts_of(&self.findings)
    }

    pub fn finding(&self, dim: DetectionDimension) -> &Finding {
        &self.findings[dim.index()]
    }
}

fn absent_findings() -> Vec<Finding> {
    DetectionDimension::ALL.into_iter().map(Finding::absent).collect()
}

/// Assess one app from its record, merged annotations and cached document.
///
/// A reviewer-asserted policy status wins over the fetch outcome. When no
/// accessible text exists, the annotations must be complete.
pub fn analyze_app(
    record: &AppRecord,
    annotations: Option<&AnnotationSet>,
    document: Option<&PolicyDocument>,
    rules: &RuleSet,
) -> Result<AppAssessment, AssessError> {
    let app = record.pseudonym.clone();
    let doc_text = document.filter(|d| d.status.is_accessible() && !d.text.is_empty()).map(|d| d.text.as_str());
    let doc_reason = document.and_then(|d| match &d.status {
        PolicyStatus::Inaccessible(r) => Some(r.to_string()),
        PolicyStatus::Accessible => None,
    });
    let access = match annotations.and_then(|a| a.policy_status) {
        Some(AnnotatedStatus::Accessible) => PolicyAccess::Accessible,
        Some(AnnotatedStatus::Inaccessible) => PolicyAccess::Inaccessible,
        None => match (document, doc_text) {
            (_, Some(_)) => PolicyAccess::Accessible,
            (Some(_), None) => PolicyAccess::Inaccessible,
            (None, None) => return Err(AssessError::Incomplete(app)),
        },
    };

    let assessment = if access == PolicyAccess::Inaccessible {
        let reason = doc_reason.unwrap_or_else(|| "marked inaccessible by reviewer".to_string());
        let profile = score_app(app.clone(), &ScoringInput::inaccessible())
            .map_err(|source| AssessError::Score { app: app.clone(), source })?;
        AppAssessment {
            app: app.clone(),
            category: record.category,
            access,
            inaccessible_reason: Some(reason),
            findings: absent_findings(),
            detected: None,
            readability: None,
            profile,
            text: None,
        }
    } else {
        let (raw, readability, text) = match doc_text {
            Some(text) => {
                let raw = detect_all(text, rules).map_err(|source| AssessError::Detect { app: app.clone(), source })?;
                let readability = match annotations.and_then(|a| a.smog_grade) {
                    Some(g) => ReadabilityResult::from_manual_grade(g),
                    None => smog_grade(text).map_err(|source| AssessError::Readability { app: app.clone(), source })?,
                };
                (Some(raw), readability, Some(text.to_string()))
            }
            None => {
                let ann =
                    annotations.filter(|a| a.is_complete()).ok_or_else(|| AssessError::Incomplete(app.clone()))?;
                let grade = ann.smog_grade.ok_or_else(|| AssessError::Incomplete(app.clone()))?;
                (None, ReadabilityResult::from_manual_grade(grade), None)
            }
        };
        let detected = raw.as_deref().map(verdicts_of);
        let base = raw.unwrap_or_else(absent_findings);
        let findings = match annotations {
            Some(a) => apply_overrides(base, a).map_err(|source| AssessError::Detect { app: app.clone(), source })?,
            None => base,
        };
        let input = ScoringInput::from_findings(access, &findings, Some(readability.clone()));
        let profile =
            score_app(app.clone(), &input).map_err(|source| AssessError::Score { app: app.clone(), source })?;
        AppAssessment {
            app: app.clone(),
            category: record.category,
            access,
            inaccessible_reason: None,
            findings,
            detected,
            readability: Some(readability),
            profile,
            text,
        }
    };
    if let Some(bad) = assessment.findings.iter().find(|f| !f.is_coupled()) {
        return Err(AssessError::Coupling { app, dimension: bad.dimension });
    }
    Ok(assessment)
}
