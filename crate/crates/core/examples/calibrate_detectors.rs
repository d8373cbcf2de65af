//! Measures hedge density and generic-assurance counts on the cached fixture
//! texts and compares them with the reviewer verdicts, to place the
//! Partial/Yes thresholds of the two clarity detectors.
//!
//! cargo run -p praf-core --example calibrate_detectors

use std::path::PathBuf;

use praf_core::corpus::load_codebook;
use praf_core::detect::{detect_ambiguity, detect_vague_commitments, FindingDetail, RuleSet};
use praf_core::dimension::{DetectionDimension as D, Verdict};
use praf_core::ingest::PolicyCache;

struct Sample {
    app: String,
    measure: f64,
    annotated: Verdict,
    detected: Verdict,
}

fn report(name: &str, samples: &[Sample]) {
    println!("{name}");
    for v in Verdict::ALL {
        let values: Vec<f64> = samples.iter().filter(|s| s.annotated == v).map(|s| s.measure).collect();
        if values.is_empty() {
            continue;
        }
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!("  annotated {v:<7} n={:<2} range [{lo:.3}, {hi:.3}]", values.len());
    }
    let agree = samples.iter().filter(|s| s.annotated == s.detected).count();
    println!("  agreement with current thresholds: {agree}/{}", samples.len());
    for s in samples.iter().filter(|s| s.annotated != s.detected) {
        println!("    {}: measure {:.3}, annotated {}, detected {}", s.app, s.measure, s.annotated, s.detected);
    }
}

fn main() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let codebook = load_codebook(&root.join("codebook.json")).expect("codebook");
    let cache = PolicyCache::new(root.join("cache"));
    let rules = RuleSet::default_rules();
    let (mut hedges, mut assurances) = (Vec::new(), Vec::new());
    for rec in &codebook.records {
        let Some(doc) = rec.policy_url.as_deref().and_then(|u| cache.get(u).ok().flatten()) else { continue };
        if doc.text.is_empty() {
            continue;
        }
        let Some(ann) = codebook.annotations_for(&rec.pseudonym) else { continue };
        let app = rec.pseudonym.to_string();
        if let (Ok(f), Some(&annotated)) =
            (detect_ambiguity(&doc.text, &rules), ann.overrides.get(&D::AmbiguousLanguage))
        {
            if let Some(FindingDetail::HedgeDensity { hedged, sentences }) = f.detail {
                let measure = hedged as f64 / sentences as f64;
                hedges.push(Sample { app: app.clone(), measure, annotated, detected: f.verdict });
            }
        }
        let f = detect_vague_commitments(&doc.text, &rules);
        if let Some(&annotated) = ann.overrides.get(&D::VagueCommitments) {
            let measure = match f.detail {
                Some(FindingDetail::GenericAssurances { sentences }) => sentences as f64,
                _ => 0.0,
            };
            assurances.push(Sample { app, measure, annotated, detected: f.verdict });
        }
    }
    let t = &rules.dimension(D::AmbiguousLanguage).thresholds;
    report(&format!("hedged-sentence density (partial >= {}, yes >= {})", t.partial, t.yes), &hedges);
    let t = &rules.dimension(D::VagueCommitments).thresholds;
    report(&format!("generic assurance sentences (partial >= {}, yes >= {})", t.partial, t.yes), &assurances);
}
