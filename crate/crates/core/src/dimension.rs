//! Detection dimensions and tri-state verdicts shared by the detector,
//! annotation, scoring and reporting layers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One column of the assessment matrix that the detectors (or a reviewer)
/// render a verdict on.
///
/// Declaration order is the matrix column order: three regulation columns,
/// six key principles, four limitation/gap columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectionDimension {
    HipaaMention,
    GdprMention,
    OtherRegulation,
    DataMinimization,
    DataEncryption,
    AccessControls,
    ConsentRequirements,
    RetentionTime,
    BreachProtocol,
    AmbiguousLanguage,
    VagueCommitments,
    AccessibilityAccommodations,
    ThirdPartySharing,
}

impl DetectionDimension {
    pub const ALL: [DetectionDimension; 13] = [
        Self::HipaaMention,
        Self::GdprMention,
        Self::OtherRegulation,
        Self::DataMinimization,
        Self::DataEncryption,
        Self::AccessControls,
        Self::ConsentRequirements,
        Self::RetentionTime,
        Self::BreachProtocol,
        Self::AmbiguousLanguage,
        Self::VagueCommitments,
        Self::AccessibilityAccommodations,
        Self::ThirdPartySharing,
    ];

    pub const REGULATIONS: [DetectionDimension; 3] = [Self::HipaaMention, Self::GdprMention, Self::OtherRegulation];

    /// Dimensions handled by keyword-tier detection (strong vs weak rules).
    pub const PRINCIPLES: [DetectionDimension; 8] = [
        Self::DataMinimization,
        Self::DataEncryption,
        Self::AccessControls,
        Self::ConsentRequirements,
        Self::RetentionTime,
        Self::BreachProtocol,
        Self::ThirdPartySharing,
        Self::AccessibilityAccommodations,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Stable snake_case identifier used in files and rule ids.
    pub fn key(self) -> &'static str {
        match self {
            Self::HipaaMention => "hipaa_mention",
            Self::GdprMention => "gdpr_mention",
            Self::OtherRegulation => "other_regulation",
            Self::DataMinimization => "data_minimization",
            Self::DataEncryption => "data_encryption",
            Self::AccessControls => "access_controls",
            Self::ConsentRequirements => "consent_requirements",
            Self::RetentionTime => "retention_time",
            Self::BreachProtocol => "breach_protocol",
            Self::AmbiguousLanguage => "ambiguous_language",
            Self::VagueCommitments => "vague_commitments",
            Self::AccessibilityAccommodations => "accessibility_accommodations",
            Self::ThirdPartySharing => "third_party_sharing",
        }
    }

    /// Column heading used in rendered tables.
    pub fn title(self) -> &'static str {
        match self {
            Self::HipaaMention => "HIPAA",
            Self::GdprMention => "GDPR",
            Self::OtherRegulation => "Others",
            Self::DataMinimization => "Data minimization",
            Self::DataEncryption => "Data encryption",
            Self::AccessControls => "Access controls",
            Self::ConsentRequirements => "Consent requirements",
            Self::RetentionTime => "Retention time",
            Self::BreachProtocol => "Breach protocol",
            Self::AmbiguousLanguage => "Ambiguous language",
            Self::VagueCommitments => "Vague commitments",
            Self::AccessibilityAccommodations => "Accessibility accommodations",
            Self::ThirdPartySharing => "Third-party sharing",
        }
    }

    pub fn is_regulation(self) -> bool {
        Self::REGULATIONS.contains(&self)
    }
}

impl fmt::Display for DetectionDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown detection dimension `{0}`")]
pub struct UnknownDimensionName(pub String);

impl FromStr for DetectionDimension {
    type Err = UnknownDimensionName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|d| d.key() == s).ok_or_else(|| UnknownDimensionName(s.to_string()))
    }
}

/// Tri-state judgement: implemented, partially/weakly addressed, absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    Partial,
    #[default]
    No,
}

impl Verdict {
    pub const ALL: [Verdict; 3] = [Verdict::Yes, Verdict::Partial, Verdict::No];

    /// Table glyph: `●` yes, `○` partial, `−` no.
    pub fn glyph(self) -> &'static str {
        match self {
            Verdict::Yes => "●",
            Verdict::Partial => "○",
            Verdict::No => "−",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::Partial => "partial",
            Verdict::No => "no",
        }
    }

    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid verdict `{0}` (expected yes, partial or no)")]
pub struct InvalidVerdict(pub String);

impl FromStr for Verdict {
    type Err = InvalidVerdict;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "yes" => Ok(Verdict::Yes),
            "partial" => Ok(Verdict::Partial),
            "no" => Ok(Verdict::No),
            other => Err(InvalidVerdict(other.to_string())),
        }
    }
}

/// One verdict per dimension, indexed by [`DetectionDimension`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Verdicts([Verdict; 13]);

impl Verdicts {
    pub fn all_no() -> Self {
        Self::default()
    }

    pub fn get(&self, dim: DetectionDimension) -> Verdict {
        self.0[dim.index()]
    }

    pub fn set(&mut self, dim: DetectionDimension, verdict: Verdict) {
        self.0[dim.index()] = verdict;
    }

    pub fn with(mut self, dim: DetectionDimension, verdict: Verdict) -> Self {
        self.set(dim, verdict);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (DetectionDimension, Verdict)> + '_ {
        DetectionDimension::ALL.into_iter().map(move |d| (d, self.get(d)))
    }
}

impl FromIterator<(DetectionDimension, Verdict)> for Verdicts {
    fn from_iter<I: IntoIterator<Item = (DetectionDimension, Verdict)>>(iter: I) -> Self {
        let mut v = Verdicts::all_no();
        for (d, verdict) in iter {
            v.set(d, verdict);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_round_trip() {
        for d in DetectionDimension::ALL {
            assert_eq!(d.key().parse::<DetectionDimension>().unwrap(), d);
            let json = serde_json::to_string(&d).unwrap();
            assert_eq!(json, format!("\"{}\"", d.key()));
        }
        assert!("consent".parse::<DetectionDimension>().is_err());
    }

    #[test]
    fn index_matches_declaration_order() {
        for (i, d) in DetectionDimension::ALL.into_iter().enumerate() {
            assert_eq!(d.index(), i);
        }
    }

    #[test]
    fn verdict_serialization() {
        assert_eq!(serde_json::to_string(&Verdict::Partial).unwrap(), "\"partial\"");
        assert_eq!("no".parse::<Verdict>().unwrap(), Verdict::No);
        assert!("maybe".parse::<Verdict>().is_err());
        assert_eq!(Verdict::Yes.glyph(), "●");
    }
}
