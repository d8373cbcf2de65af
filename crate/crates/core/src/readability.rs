//! SMOG readability grade and its six difficulty bands.
//!
//! Grade: `1.0430 * sqrt(polysyllables * 30 / sentences) + 3.1291`, where a
//! polysyllable is a word of three or more syllables.
//!
//! Bands (grade → code → rubric points):
//!
//! | grade          | band | points |
//! |----------------|------|--------|
//! | < 9.5          | SD   | 6      |
//! | [9.5, 10.5)    | SWD  | 5      |
//! | [10.5, 11.5)   | FD   | 4      |
//! | [11.5, 12.5)   | D    | 3      |
//! | [12.5, 13.5)   | VD   | 2      |
//! | ≥ 13.5         | P    | 1      |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use crate::text::segment_sentences;
use crate::text::{sentence_spans, words};

pub const SMOG_SLOPE: f64 = 1.0430;
pub const SMOG_INTERCEPT: f64 = 3.1291;

/// Lower grade bounds of SWD, FD, D, VD and P.
pub const BAND_THRESHOLDS: [f64; 5] = [9.5, 10.5, 11.5, 12.5, 13.5];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReadabilityError {
    #[error("token `{0}` contains no letters")]
    NonAlphabetic(String),
    #[error("text contains no sentences")]
    NoSentences,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ReadabilityBand {
    #[serde(rename = "SD")]
    SlightlyDifficult,
    #[serde(rename = "SWD")]
    SomewhatDifficult,
    #[serde(rename = "FD")]
    FairlyDifficult,
    #[serde(rename = "D")]
    Difficult,
    #[serde(rename = "VD")]
    VeryDifficult,
    #[serde(rename = "P")]
    Professional,
}

impl ReadabilityBand {
    pub const ALL: [ReadabilityBand; 6] = [
        Self::SlightlyDifficult,
        Self::SomewhatDifficult,
        Self::FairlyDifficult,
        Self::Difficult,
        Self::VeryDifficult,
        Self::Professional,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Self::SlightlyDifficult => "SD",
            Self::SomewhatDifficult => "SWD",
            Self::FairlyDifficult => "FD",
            Self::Difficult => "D",
            Self::VeryDifficult => "VD",
            Self::Professional => "P",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::SlightlyDifficult => "Slightly Difficult",
            Self::SomewhatDifficult => "Somewhat Difficult",
            Self::FairlyDifficult => "Fairly Difficult",
            Self::Difficult => "Difficult",
            Self::VeryDifficult => "Very Difficult",
            Self::Professional => "Professional",
        }
    }
}

impl fmt::Display for ReadabilityBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ReadabilityBand {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|b| b.code() == s).ok_or_else(|| format!("unknown readability band `{s}`"))
    }
}

/// Difficulty band of a SMOG grade.
pub fn band(grade: f64) -> ReadabilityBand {
    let [swd, fd, d, vd, p] = BAND_THRESHOLDS;
    match grade {
        g if g < swd => ReadabilityBand::SlightlyDifficult,
        g if g < fd => ReadabilityBand::SomewhatDifficult,
        g if g < d => ReadabilityBand::FairlyDifficult,
        g if g < vd => ReadabilityBand::Difficult,
        g if g < p => ReadabilityBand::VeryDifficult,
        _ => ReadabilityBand::Professional,
    }
}

/// Rubric points for a band: harder text earns fewer points.
pub fn readability_points(band: ReadabilityBand) -> u8 {
    match band {
        ReadabilityBand::Professional => 1,
        ReadabilityBand::VeryDifficult => 2,
        ReadabilityBand::Difficult => 3,
        ReadabilityBand::FairlyDifficult => 4,
        ReadabilityBand::SomewhatDifficult => 5,
        ReadabilityBand::SlightlyDifficult => 6,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadabilityResult {
    pub smog_grade: f64,
    pub sentence_count: usize,
    pub polysyllable_count: usize,
    pub band: ReadabilityBand,
    pub points: u8,
    /// Set when the grade was supplied by a reviewer rather than computed;
    /// the counts are then zero and carry no meaning.
    #[serde(default)]
    pub manual: bool,
}

impl ReadabilityResult {
    /// Result for the given counts. `sentence_count` must be positive.
    pub fn from_counts(sentence_count: usize, polysyllable_count: usize) -> Result<Self, ReadabilityError> {
        let grade = smog_from_counts(sentence_count, polysyllable_count)?;
        let band = band(grade);
        Ok(Self {
            smog_grade: grade,
            sentence_count,
            polysyllable_count,
            band,
            points: readability_points(band),
            manual: false,
        })
    }

    pub fn from_manual_grade(grade: f64) -> Self {
        let band = band(grade);
        Self {
            smog_grade: grade,
            sentence_count: 0,
            polysyllable_count: 0,
            band,
            points: readability_points(band),
            manual: true,
        }
    }
}

pub fn smog_from_counts(sentence_count: usize, polysyllable_count: usize) -> Result<f64, ReadabilityError> {
    if sentence_count == 0 {
        return Err(ReadabilityError::NoSentences);
    }
    let per_30 = polysyllable_count as f64 * 30.0 / sentence_count as f64;
    Ok(SMOG_SLOPE * per_30.sqrt() + SMOG_INTERCEPT)
}

/// SMOG grade of a plain-text document.
pub fn smog_grade(text: &str) -> Result<ReadabilityResult, ReadabilityError> {
    let sentences = sentence_spans(text).len();
    if sentences == 0 {
        return Err(ReadabilityError::NoSentences);
    }
    let polysyllables = words(text).into_iter().filter(|w| count_syllables(w).is_ok_and(|n| n >= 3)).count();
    ReadabilityResult::from_counts(sentences, polysyllables)
}

/// Heuristic syllable count.
///
/// Counts maximal vowel groups (`a e i o u`, plus `y` unless it precedes a
/// vowel, minus `u` after `q`), then adjusts:
/// * `ia`/`io…` groups split into two syllables except after c, t, s, x, g, n
///   (`period`, `media` vs `nation`, `senior`);
/// * a silent final `e` is dropped, except consonant + `le` and `-ire`;
/// * silent `-ed` (not after t/d), `-es` (not after sibilants) and `-ely`
///   endings are dropped.
///
/// The result is at least 1.
pub fn count_syllables(word: &str) -> Result<u32, ReadabilityError> {
    let w: Vec<char> = word.chars().filter(|c| c.is_alphabetic()).flat_map(char::to_lowercase).collect();
    if w.is_empty() {
        return Err(ReadabilityError::NonAlphabetic(word.to_string()));
    }
    let n = w.len();
    let plain_vowel = |c: char| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u');
    let vowel_at = |i: usize| match w[i] {
        'a' | 'e' | 'i' | 'o' => true,
        'u' => !(i > 0 && w[i - 1] == 'q'),
        'y' => !(i + 1 < n && plain_vowel(w[i + 1])),
        _ => false,
    };
    let consonant_at = |i: usize| !matches!(w[i], 'a' | 'e' | 'i' | 'o' | 'u' | 'y');

    let mut count: i32 = 0;
    let mut i = 0;
    while i < n {
        if !vowel_at(i) {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && vowel_at(i) {
            i += 1;
        }
        count += 1;
        let group = &w[start..i];
        let hiatus = group == ['i', 'a'] || group.starts_with(&['i', 'o']);
        if hiatus && start > 0 && !matches!(w[start - 1], 'c' | 't' | 's' | 'x' | 'g' | 'n') {
            count += 1;
        }
    }

    let ends = |suffix: &str| {
        let s: Vec<char> = suffix.chars().collect();
        n >= s.len() && w[n - s.len()..] == s[..]
    };
    if count > 1 && !(ends("ire") || ends("ired") || ends("ires")) {
        let silent = if ends("e") {
            n >= 2 && consonant_at(n - 2) && !(ends("le") && n >= 3 && consonant_at(n - 3))
        } else if ends("ed") {
            n >= 3 && consonant_at(n - 3) && !matches!(w[n - 3], 't' | 'd')
        } else if ends("es") {
            n >= 3
                && consonant_at(n - 3)
                && !matches!(w[n - 3], 'c' | 'g' | 's' | 'z' | 'x')
                && !ends("shes")
                && !ends("ches")
                && !(ends("les") && n >= 4 && consonant_at(n - 4))
        } else if ends("ely") {
            n >= 4 && consonant_at(n - 4)
        } else {
            false
        };
        if silent {
            count -= 1;
        }
    }
    Ok(count.max(1) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syllable_examples() {
        assert_eq!(count_syllables("a").unwrap(), 1);
        assert_eq!(count_syllables("data").unwrap(), 2);
        assert_eq!(count_syllables("encryption").unwrap(), 3);
        assert_eq!(count_syllables("HIPAA").unwrap(), 2);
        assert_eq!(count_syllables("the").unwrap(), 1);
        assert_eq!(count_syllables("simple").unwrap(), 2);
        assert_eq!(count_syllables("employee").unwrap(), 3);
        assert_eq!(count_syllables("require").unwrap(), 3);
        assert_eq!(count_syllables("shared").unwrap(), 1);
        assert_eq!(count_syllables("collected").unwrap(), 3);
        assert_eq!(count_syllables("measures").unwrap(), 2);
        assert_eq!(count_syllables("services").unwrap(), 3);
        assert_eq!(count_syllables("period").unwrap(), 3);
        assert_eq!(count_syllables("nation").unwrap(), 2);
        assert_eq!(count_syllables("don't").unwrap(), 1);
    }

    #[test]
    fn syllables_reject_non_alphabetic() {
        assert_eq!(count_syllables("2024"), Err(ReadabilityError::NonAlphabetic("2024".into())));
        assert!(count_syllables("").is_err());
    }

    #[test]
    fn formula_examples() {
        assert_eq!(smog_from_counts(30, 0).unwrap(), 3.1291);
        assert!((smog_from_counts(30, 30).unwrap() - 8.8419).abs() < 5e-4);
        assert!((smog_from_counts(45, 60).unwrap() - 9.7257).abs() < 5e-4);
        assert_eq!(smog_from_counts(0, 3), Err(ReadabilityError::NoSentences));
    }

    #[test]
    fn band_examples() {
        assert_eq!(band(9.2), ReadabilityBand::SlightlyDifficult);
        assert_eq!(band(12.4), ReadabilityBand::Difficult);
        assert_eq!(band(12.8), ReadabilityBand::VeryDifficult);
        assert_eq!(band(14.2), ReadabilityBand::Professional);
        assert_eq!(band(9.5), ReadabilityBand::SomewhatDifficult);
        assert_eq!(band(11.5), ReadabilityBand::Difficult);
        assert_eq!(band(0.0), ReadabilityBand::SlightlyDifficult);
    }

    #[test]
    fn points_examples() {
        assert_eq!(readability_points(ReadabilityBand::Professional), 1);
        assert_eq!(readability_points(ReadabilityBand::SlightlyDifficult), 6);
        assert_eq!(readability_points(ReadabilityBand::Difficult), 3);
    }

    #[test]
    fn smog_of_text() {
        assert_eq!(smog_grade("   "), Err(ReadabilityError::NoSentences));
        let r = smog_grade("We collect data. Information is encrypted.").unwrap();
        assert_eq!(r.sentence_count, 2);
        // information (4), encrypted (3)
        assert_eq!(r.polysyllable_count, 2);
        assert!((r.smog_grade - smog_from_counts(2, 2).unwrap()).abs() < 1e-12);
        assert_eq!(r.points, readability_points(r.band));
        assert!(!r.manual);
    }

    #[test]
    fn band_serializes_as_code() {
        assert_eq!(serde_json::to_string(&ReadabilityBand::SomewhatDifficult).unwrap(), "\"SWD\"");
        assert_eq!("VD".parse::<ReadabilityBand>().unwrap(), ReadabilityBand::VeryDifficult);
    }
}
