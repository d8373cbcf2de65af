//! The five-element privacy risk rubric.
//!
//! Implemented criteria earn 2 points and missing ones 1; `Partial` counts
//! as missing everywhere except the clarity criteria, where any ambiguity or
//! vagueness costs the point. Inaccessible policies score 0 on every element.

use serde::{Deserialize, Serialize};

use crate::corpus::Pseudonym;
use crate::detect::{verdicts_of, Finding};
use crate::dimension::{DetectionDimension as D, Verdict, Verdicts};
use crate::readability::ReadabilityResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyAccess {
    Accessible,
    Inaccessible,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScoreError {
    #[error("accessible policy has no readability result")]
    MissingReadability,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoringInput {
    pub access: PolicyAccess,
    pub verdicts: Verdicts,
    pub readability: Option<ReadabilityResult>,
}

impl ScoringInput {
    pub fn accessible(verdicts: Verdicts, readability: ReadabilityResult) -> Self {
        Self { access: PolicyAccess::Accessible, verdicts, readability: Some(readability) }
    }

    pub fn inaccessible() -> Self {
        Self { access: PolicyAccess::Inaccessible, verdicts: Verdicts::all_no(), readability: None }
    }

    pub fn from_findings(access: PolicyAccess, findings: &[Finding], readability: Option<ReadabilityResult>) -> Self {
        Self { access, verdicts: verdicts_of(findings), readability }
    }

    fn is_inaccessible(&self) -> bool {
        self.access == PolicyAccess::Inaccessible
    }

    fn implemented(&self, dim: D) -> u8 {
        if self.verdicts.get(dim).is_yes() {
            2
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrafProfile {
    pub app: Pseudonym,
    pub regulatory: u8,
    pub security: u8,
    pub usability: u8,
    pub min_retention: u8,
    pub third_party: u8,
    pub overall: u8,
}

impl PrafProfile {
    /// Element scores in report column order.
    pub fn elements(&self) -> [u8; 5] {
        [self.regulatory, self.security, self.usability, self.min_retention, self.third_party]
    }

    pub fn is_zero(&self) -> bool {
        self.overall == 0 && self.elements().iter().all(|&e| e == 0)
    }
}

pub const ELEMENT_NAMES: [&str; 5] = [
    "Regulatory Compliance",
    "Data Security",
    "Usability/Accessibility",
    "Minimization/Retention",
    "3rd-party Sharing",
];

pub fn score_regulatory(input: &ScoringInput) -> u8 {
    if input.is_inaccessible() {
        return 0;
    }
    let v = &input.verdicts;
    match (v.get(D::HipaaMention).is_yes(), v.get(D::GdprMention).is_yes()) {
        (true, true) => 4,
        (true, false) | (false, true) => 3,
        _ if v.get(D::OtherRegulation).is_yes() => 2,
        _ => 1,
    }
}

pub fn score_security(input: &ScoringInput) -> u8 {
    if input.is_inaccessible() {
        return 0;
    }
    [D::DataEncryption, D::AccessControls, D::BreachProtocol].into_iter().map(|d| input.implemented(d)).sum()
}

fn clarity(verdict: Verdict) -> u8 {
    if verdict == Verdict::No {
        2
    } else {
        1
    }
}

pub fn score_usability(input: &ScoringInput) -> Result<u8, ScoreError> {
    if input.is_inaccessible() {
        return Ok(0);
    }
    let readability = input.readability.as_ref().ok_or(ScoreError::MissingReadability)?;
    let v = &input.verdicts;
    Ok(readability.points
        + clarity(v.get(D::AmbiguousLanguage))
        + clarity(v.get(D::VagueCommitments))
        + input.implemented(D::AccessibilityAccommodations))
}

pub fn score_min_retention(input: &ScoringInput) -> u8 {
    if input.is_inaccessible() {
        return 0;
    }
    input.implemented(D::DataMinimization) + input.implemented(D::RetentionTime)
}

pub fn score_third_party(input: &ScoringInput) -> u8 {
    if input.is_inaccessible() {
        return 0;
    }
    input.implemented(D::ThirdPartySharing)
}

pub fn score_app(app: Pseudonym, input: &ScoringInput) -> Result<PrafProfile, ScoreError> {
    let regulatory = score_regulatory(input);
    let security = score_security(input);
    let usability = score_usability(input)?;
    let min_retention = score_min_retention(input);
    let third_party = score_third_party(input);
    Ok(PrafProfile {
        app,
        regulatory,
        security,
        usability,
        min_retention,
        third_party,
        overall: regulatory + security + usability + min_retention + third_party,
    })
}
