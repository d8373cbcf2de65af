//! Checks against frozen external references: a pronouncing dictionary for
//! syllables, hand-labeled sentence boundaries and a hand-written extraction.

use praf_core::ingest::extract_text;
use praf_core::readability::{count_syllables, segment_sentences, smog_from_counts};

const SYLLABLES: &str = include_str!("fixtures/syllables_cmudict.tsv");
const SEGMENTATION: &str = include_str!("fixtures/segmentation.txt");
const EXTRACT_INPUT: &str = include_str!("fixtures/extract_input.html");
const EXTRACT_EXPECTED: &str = include_str!("fixtures/extract_expected.txt");

#[test]
fn syllable_heuristic_agrees_with_dictionary() {
    let mut total = 0;
    let mut misses = Vec::new();
    for line in SYLLABLES.lines().filter(|l| !l.is_empty()) {
        let (word, count) = line.split_once('\t').expect("word<TAB>count");
        let expected: u32 = count.parse().unwrap();
        total += 1;
        let got = count_syllables(word).unwrap();
        if got != expected {
            misses.push(format!("{word}: {got} vs {expected}"));
        }
    }
    assert_eq!(total, 200);
    let agreement = (total - misses.len()) as f64 / total as f64;
    assert!(agreement >= 0.95, "agreement {agreement:.3}; misses: {misses:?}");
}

#[test]
fn spec_syllable_examples() {
    assert_eq!(count_syllables("a").unwrap(), 1);
    assert_eq!(count_syllables("data").unwrap(), 2);
    assert_eq!(count_syllables("encryption").unwrap(), 3);
    assert!(count_syllables("2024").is_err());
}

#[test]
fn segmentation_matches_hand_labels() {
    let mut checked = 0;
    for passage in SEGMENTATION.split("\n---\n") {
        let expected: Vec<&str> = passage.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).collect();
        let input = expected.join(" ");
        assert_eq!(segment_sentences(&input), expected, "passage starting {:?}", expected[0]);
        checked += expected.len();
    }
    assert_eq!(checked, 50);
}

#[test]
fn extraction_matches_hand_written_output() {
    let got = extract_text(EXTRACT_INPUT.as_bytes(), "text/html").unwrap();
    assert_eq!(got, EXTRACT_EXPECTED.trim_end());
}

/// Independent evaluation of the SMOG regression.
fn smog_oracle(sentences: f64, polysyllables: f64) -> f64 {
    3.1291 + 1.0430 * (polysyllables * (30.0 / sentences)).sqrt()
}

#[test]
fn smog_reference_values() {
    assert_eq!(smog_from_counts(30, 0).unwrap(), 3.1291);
    assert!((smog_from_counts(30, 30).unwrap() - 8.8419).abs() <= 0.0005);
    assert!((smog_from_counts(45, 60).unwrap() - 9.7257).abs() <= 0.0005);
    for (s, p) in [(1, 1), (7, 19), (120, 33), (300, 1000)] {
        let got = smog_from_counts(s, p).unwrap();
        assert!((got - smog_oracle(s as f64, p as f64)).abs() < 1e-12);
    }
    assert!(smog_from_counts(0, 3).is_err());
}
