//! Derives the readability band cut points from the transcribed grade/level
//! pairs and checks the shipped thresholds fall inside the feasible gaps.
//!
//! cargo run -p praf-core --example fit_bands [-- path/to/table1_expected.json]

use std::path::PathBuf;

use praf_core::readability::{ReadabilityBand, BAND_THRESHOLDS};
use praf_core::verify::ExpectedTable;

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/table1_expected.json"));
    let table = ExpectedTable::load(&path).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2);
    });
    let pairs: Vec<(f64, ReadabilityBand)> =
        table.apps.iter().filter_map(|a| Some((a.smog_grade?, a.level?))).collect();
    println!("{} graded apps", pairs.len());

    let mut ok = true;
    for (i, w) in ReadabilityBand::ALL.windows(2).enumerate() {
        let (lower, upper) = (w[0], w[1]);
        let hi_of_lower = pairs.iter().filter(|p| p.1 == lower).map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let lo_of_upper = pairs.iter().filter(|p| p.1 == upper).map(|p| p.0).fold(f64::INFINITY, f64::min);
        let cut = BAND_THRESHOLDS[i];
        let fits = hi_of_lower < cut && cut <= lo_of_upper;
        ok &= fits;
        println!(
            "{:>3} | {:<3}  feasible ({hi_of_lower:.1}, {lo_of_upper:.1}]  shipped {cut}  {}",
            lower.code(),
            upper.code(),
            if fits { "ok" } else { "OUTSIDE" }
        );
    }
    if !ok {
        std::process::exit(1);
    }
}
