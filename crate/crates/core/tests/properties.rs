use chrono::{TimeZone, Utc};
use proptest::prelude::*;

use praf_core::assess::{analyze_app, AppAssessment};
use praf_core::corpus::{
    assign_pseudonyms, load_codebook, save_codebook, AnnotatedStatus, AnnotationSet, AppCategory, AppRecord, Codebook,
    Pseudonym, RawAppEntry, StoreSource,
};
use praf_core::detect::{apply_overrides, detect_all, detect_regulations, RuleSet};
use praf_core::dimension::{DetectionDimension as D, Verdict, Verdicts};
use praf_core::ingest::extract_text;
use praf_core::readability::{band, readability_points, smog_from_counts, ReadabilityResult};
use praf_core::report::{emit_matrix, parse_matrix_csv, parse_matrix_json, summarize, MatrixFormat, MatrixRow};
use praf_core::score::{score_app, ScoringInput};
use praf_core::text::sentence_spans;

const PHRASES: &[&str] = &[
    "We encrypt your data in transit.",
    "Data is kept for 3 years.",
    "We comply with HIPAA.",
    "We may share information with partners.",
    "We collect only what is necessary.",
    "Access is restricted to authorized staff.",
    "We will notify you of any breach.",
    "Your consent is required.",
    "We take your privacy seriously.",
    "The app supports screen readers.",
    "We sell nothing.",
    "Records are stored in the U.S. by Acme Inc. for approx. six months.",
    "Questions? Write to us!",
];

fn verdict() -> impl Strategy<Value = Verdict> {
    prop::sample::select(Verdict::ALL.to_vec())
}

fn verdicts() -> impl Strategy<Value = Verdicts> {
    prop::array::uniform13(verdict()).prop_map(|vs| D::ALL.into_iter().zip(vs).collect())
}

fn policy_text() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(PHRASES.to_vec()), 1..12).prop_map(|v| v.join(" "))
}

fn pseudonym(n: u32) -> Pseudonym {
    Pseudonym::new('A', n).unwrap()
}

fn input(verdicts: Verdicts, grade: f64) -> ScoringInput {
    ScoringInput::accessible(verdicts, ReadabilityResult::from_manual_grade(grade))
}

/// Complete reviewer annotations for a synthetic app.
fn annotated(n: u32, verdicts: Verdicts, grade: f64, accessible: bool) -> (AppRecord, AnnotationSet) {
    let record = AppRecord {
        pseudonym: pseudonym(n),
        real_name: None,
        category: AppCategory::ALL[n as usize % 6],
        policy_url: None,
        store_source: StoreSource::Other,
    };
    let mut a = AnnotationSet::new(pseudonym(n), Utc.with_ymd_and_hms(2025, 1, 1, 0, 0, 0).unwrap());
    a.overrides = verdicts.iter().collect();
    a.smog_grade = Some(grade);
    a.policy_status = Some(if accessible { AnnotatedStatus::Accessible } else { AnnotatedStatus::Inaccessible });
    (record, a)
}

fn raw_entries() -> impl Strategy<Value = Vec<RawAppEntry>> {
    let entry = (
        "[A-Za-z][A-Za-z &'-]{0,20}",
        prop::sample::select(AppCategory::ALL.to_vec()),
        prop::option::of("https://[a-z]{1,10}\\.example/[a-z0-9/]{0,12}"),
        prop::sample::select(vec![StoreSource::AppleStore, StoreSource::GooglePlay, StoreSource::Other]),
    )
        .prop_map(|(real_name, category, policy_url, store_source)| RawAppEntry {
            real_name,
            category,
            policy_url,
            store_source,
        });
    prop::collection::vec(entry, 0..40)
}

fn corpus() -> impl Strategy<Value = Vec<(Verdicts, f64, bool)>> {
    prop::collection::vec((verdicts(), 6.0f64..20.0, prop::bool::weighted(0.9)), 1..20)
}

fn assess_corpus(apps: &[(Verdicts, f64, bool)]) -> (Codebook, Vec<AppAssessment>) {
    let rules = RuleSet::default_rules();
    let mut codebook = Codebook { records: Vec::new(), annotations: Vec::new() };
    let mut out = Vec::new();
    for (i, (v, g, acc)) in apps.iter().enumerate() {
        let (record, ann) = annotated(i as u32 + 1, *v, *g, *acc);
        out.push(analyze_app(&record, Some(&ann), None, &rules).unwrap());
        codebook.records.push(record);
        codebook.annotations.push(ann);
    }
    (codebook, out)
}

proptest! {
    #[test]
    fn smog_grows_with_polysyllables(s in 1usize..500, p in 0usize..2000, extra in 1usize..200) {
        let lo = smog_from_counts(s, p).unwrap();
        let hi = smog_from_counts(s, p + extra).unwrap();
        prop_assert!(hi > lo);
        prop_assert!(lo >= 3.1291);
    }

    #[test]
    fn smog_shrinks_with_sentences(s in 1usize..500, p in 1usize..2000, extra in 1usize..200) {
        prop_assert!(smog_from_counts(s + extra, p).unwrap() < smog_from_counts(s, p).unwrap());
    }

    #[test]
    fn points_follow_band(g in 0.0f64..30.0) {
        let r = ReadabilityResult::from_manual_grade(g);
        prop_assert_eq!(r.points, readability_points(band(g)));
        prop_assert!((1..=6).contains(&r.points));
    }

    #[test]
    fn points_never_rise_with_grade(a in 0.0f64..30.0, b in 0.0f64..30.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(readability_points(band(hi)) <= readability_points(band(lo)));
    }

    #[test]
    fn sentence_spans_are_ordered_and_trimmed(text in "[A-Za-z .!?\n]{0,200}") {
        let spans = sentence_spans(&text);
        let mut last = 0;
        for r in spans {
            prop_assert!(r.start >= last && r.start < r.end && r.end <= text.len());
            let s = &text[r.clone()];
            prop_assert_eq!(s.trim(), s);
            last = r.end;
        }
    }

    #[test]
    fn extraction_is_idempotent(body in "(<p>|</p>|<br>|<script>x</script>|[a-z ]{1,8}|&amp;|\u{200b}|\t|\n){0,30}") {
        if let Ok(text) = extract_text(body.as_bytes(), "text/html") {
            prop_assert!(!text.contains('<') && !text.contains('>'));
            prop_assert!(!text.chars().any(|c| c.is_control() && c != '\n'));
            prop_assert_eq!(extract_text(text.as_bytes(), "text/plain").unwrap(), text);
        }
    }

    #[test]
    fn detection_is_deterministic_and_sound(text in policy_text()) {
        let rules = RuleSet::default_rules();
        let first = detect_all(&text, &rules).unwrap();
        prop_assert_eq!(&first, &detect_all(&text, &rules).unwrap());
        for f in &first {
            prop_assert!(f.is_coupled(), "{:?}", f);
            for e in &f.evidence {
                let rule = rules.rule(&e.rule_id).expect("known rule id");
                prop_assert!(rule.is_match(&text[e.range()]), "{} on {:?}", e.rule_id, &text[e.range()]);
            }
        }
    }

    #[test]
    fn adding_hipaa_mention_never_removes_it(text in policy_text()) {
        let rules = RuleSet::default_rules();
        let with = format!("{text} This service follows HIPAA.");
        prop_assert_eq!(detect_regulations(&with, &rules)[0].verdict, Verdict::Yes);
    }

    #[test]
    fn overrides_are_idempotent(text in policy_text(), v in verdicts(), mask in prop::array::uniform13(any::<bool>())) {
        let rules = RuleSet::default_rules();
        let mut ann = AnnotationSet::new(pseudonym(1), Utc.with_ymd_and_hms(2025, 1, 1, 0, 0, 0).unwrap());
        ann.overrides = v.iter().zip(mask).filter(|(_, m)| *m).map(|(dv, _)| dv).collect();
        let once = apply_overrides(detect_all(&text, &rules).unwrap(), &ann).unwrap();
        let twice = apply_overrides(once.clone(), &ann).unwrap();
        prop_assert_eq!(&once, &twice);
        for f in &once {
            prop_assert!(f.is_coupled());
            if let Some(&want) = ann.overrides.get(&f.dimension) {
                prop_assert_eq!(f.verdict, want);
            }
        }
    }

    #[test]
    fn scores_stay_in_bounds_and_add_up(v in verdicts(), g in 0.0f64..25.0) {
        let p = score_app(pseudonym(1), &input(v, g)).unwrap();
        prop_assert!((1..=4).contains(&p.regulatory));
        prop_assert!((3..=6).contains(&p.security));
        prop_assert!((4..=12).contains(&p.usability));
        prop_assert!((2..=4).contains(&p.min_retention));
        prop_assert!((1..=2).contains(&p.third_party));
        prop_assert!((11..=28).contains(&p.overall));
        prop_assert_eq!(p.overall as u32, p.elements().iter().map(|&e| e as u32).sum::<u32>());
    }

    #[test]
    fn implementing_a_dimension_never_lowers_the_score(v in verdicts(), g in 0.0f64..25.0, i in 0usize..13) {
        let dim = D::ALL[i];
        prop_assume!(v.get(dim) == Verdict::No && dim != D::AmbiguousLanguage && dim != D::VagueCommitments);
        let before = score_app(pseudonym(1), &input(v, g)).unwrap();
        let after = score_app(pseudonym(1), &input(v.with(dim, Verdict::Yes), g)).unwrap();
        for (b, a) in before.elements().iter().zip(after.elements()) {
            prop_assert!(a >= *b);
        }
    }

    #[test]
    fn inaccessible_scores_zero(v in verdicts()) {
        let mut inp = ScoringInput::inaccessible();
        inp.verdicts = v;
        prop_assert!(score_app(pseudonym(1), &inp).unwrap().is_zero());
    }

    #[test]
    fn summary_ignores_row_order(apps in corpus(), seed in any::<u64>()) {
        let (_, assessments) = assess_corpus(&apps);
        prop_assume!(assessments.iter().any(|a| a.readability.is_some()));
        let mut shuffled = assessments.clone();
        let n = shuffled.len();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(summarize(&assessments).unwrap(), summarize(&shuffled).unwrap());
    }

    #[test]
    fn machine_matrices_round_trip(apps in corpus()) {
        let (codebook, assessments) = assess_corpus(&apps);
        let expected: Vec<MatrixRow> = assessments.iter().map(MatrixRow::from_assessment).collect();
        let csv = emit_matrix(&codebook, &assessments, MatrixFormat::Csv, false).unwrap();
        let json = emit_matrix(&codebook, &assessments, MatrixFormat::Json, false).unwrap();
        prop_assert_eq!(parse_matrix_csv(&csv).unwrap(), expected.clone());
        prop_assert_eq!(parse_matrix_json(&json).unwrap(), expected);
    }

    #[test]
    fn pseudonyms_are_a_bijection(entries in raw_entries()) {
        let names: Vec<String> = entries.iter().map(|e| e.real_name.clone()).collect();
        let cb = assign_pseudonyms(entries);
        prop_assert_eq!(cb.records.len(), names.len());
        for (i, (rec, name)) in cb.records.iter().zip(&names).enumerate() {
            prop_assert_eq!(rec.pseudonym.to_string(), format!("A{}", i + 1));
            prop_assert_eq!(rec.real_name.as_ref().map(|r| r.reveal()), Some(name.as_str()));
        }
    }

    #[test]
    fn codebook_persistence_round_trips(entries in raw_entries(), vs in prop::collection::vec((verdicts(), 6.0f64..20.0, any::<bool>(), "[ -~]{0,30}"), 0..40)) {
        let mut cb = assign_pseudonyms(entries);
        let apps: Vec<Pseudonym> = cb.records.iter().map(|r| r.pseudonym.clone()).collect();
        for (app, (v, grade, accessible, note)) in apps.into_iter().zip(vs) {
            let (_, mut ann) = annotated(app.number(), v, grade, accessible);
            ann.reviewer_note = note;
            cb.annotations.push(ann);
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("codebook.json");
        save_codebook(&cb, &path).unwrap();
        prop_assert_eq!(load_codebook(&path).unwrap(), cb);
    }
}
