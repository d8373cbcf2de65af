use std::path::{Path, PathBuf};
use std::time::Duration;

use chrono::{SecondsFormat, Utc};
use praf_core::assess::{analyze_app, AppAssessment, AssessError};
use praf_core::corpus::{load_codebook, write_atomic, Codebook};
use praf_core::detect::RuleSet;
use praf_core::ingest::{
    fetch_document, FetchOptions, HttpTransport, InaccessibleReason, PolicyCache, PolicyDocument, PolicyStatus,
    ReplayTransport, Transport,
};
use praf_core::report::{emit_app_report, emit_matrix, emit_smog_plot_csv, render_summary, summarize, MatrixFormat};
use praf_core::verify::{render_checks, verify as verify_table, ExpectedTable};
use serde::Serialize;

use crate::pool::parallel_map;
use crate::{CommonArgs, FetchArgs, VerifyArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("incomplete inputs:\n{0}")]
    Incomplete(String),
    #[error("verification failed: {0} mismatching cells")]
    VerifyFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Incomplete(_) => 3,
        }
    }
}

fn config<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Config(e.to_string())
}

fn load_inputs(args: &CommonArgs) -> Result<(Codebook, RuleSet), CliError> {
    let codebook =
        load_codebook(&args.codebook).map_err(|e| CliError::Config(format!("{}: {e}", args.codebook.display())))?;
    let rules = match &args.rules {
        Some(path) => RuleSet::load(path).map_err(config)?,
        None => RuleSet::default_rules(),
    };
    Ok((codebook, rules))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("{}: {e}", dir.display())))?;
    }
    write_atomic(path, contents.as_bytes()).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// The only line of any output that varies between runs.
fn header() -> String {
    format!(
        "<!-- generated by praf {} at {} -->\n",
        env!("CARGO_PKG_VERSION"),
        Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
    )
}

#[derive(Debug, Serialize)]
struct ManifestEntry {
    app: String,
    url: Option<String>,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<InaccessibleReason>,
}

pub fn fetch(args: &FetchArgs) -> Result<(), CliError> {
    let common = &args.common;
    let codebook =
        load_codebook(&common.codebook).map_err(|e| CliError::Config(format!("{}: {e}", common.codebook.display())))?;
    let cache = PolicyCache::new(&common.cache);
    let transport: Option<Box<dyn Transport>> = match (&args.replay, common.offline) {
        (Some(dir), _) => Some(Box::new(ReplayTransport::open(dir).map_err(config)?)),
        (None, true) => None,
        (None, false) => Some(Box::new(HttpTransport::new(&args.user_agent))),
    };
    let opts = FetchOptions {
        timeout: Duration::from_secs(args.timeout),
        retries: args.retries,
        backoff: if args.replay.is_some() { Duration::ZERO } else { FetchOptions::default().backoff },
        user_agent: args.user_agent.clone(),
        respect_robots: !args.ignore_robots,
    };
    let now = Utc::now();
    let outcomes = parallel_map(&codebook.records, common.jobs as usize, |rec| -> Result<ManifestEntry, CliError> {
        let url = rec.policy_url.as_deref();
        let doc = match (url, &transport) {
            (None, _) => PolicyDocument::inaccessible(rec.pseudonym.clone(), "", InaccessibleReason::NoUrl, now),
            (Some(u), None) => match cache.get(u).map_err(config)? {
                Some(doc) => doc,
                None => PolicyDocument::inaccessible(rec.pseudonym.clone(), u, InaccessibleReason::NoCache, now),
            },
            (Some(u), Some(t)) => {
                let doc = fetch_document(rec.pseudonym.clone(), Some(u), t.as_ref(), &opts, now);
                cache.put(u, &doc).map_err(config)?;
                doc
            }
        };
        let (status, reason) = match doc.status {
            PolicyStatus::Accessible => ("accessible", None),
            PolicyStatus::Inaccessible(r) => ("inaccessible", Some(r)),
        };
        Ok(ManifestEntry { app: rec.pseudonym.to_string(), url: url.map(str::to_string), status, reason })
    });
    let manifest = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;
    let accessible = manifest.iter().filter(|m| m.status == "accessible").count();
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    write_file(&common.out.join("fetch_manifest.json"), &json)?;
    for m in manifest.iter().filter(|m| m.reason.is_some()) {
        println!("{}: {}", m.app, m.reason.as_ref().expect("filtered"));
    }
    println!("{} apps: {accessible} accessible, {} inaccessible", manifest.len(), manifest.len() - accessible);
    Ok(())
}

fn assess_all(
    codebook: &Codebook,
    rules: &RuleSet,
    cache: Option<&PolicyCache>,
    jobs: usize,
) -> Result<Vec<AppAssessment>, CliError> {
    let results = parallel_map(&codebook.records, jobs, |rec| -> Result<AppAssessment, AssessError> {
        let doc = match (cache, rec.policy_url.as_deref()) {
            (Some(c), Some(url)) => c.get(url).ok().flatten(),
            _ => None,
        };
        let annotations = codebook.annotations_for(&rec.pseudonym);
        analyze_app(rec, annotations.as_ref(), doc.as_ref(), rules)
    });
    let mut assessments = Vec::new();
    let mut incomplete = Vec::new();
    for r in results {
        match r {
            Ok(a) => assessments.push(a),
            Err(e @ AssessError::Incomplete(_)) => incomplete.push(e.to_string()),
            Err(e) => return Err(config(e)),
        }
    }
    if !incomplete.is_empty() {
        return Err(CliError::Incomplete(incomplete.join("\n")));
    }
    Ok(assessments)
}

pub fn audit(args: &CommonArgs) -> Result<(), CliError> {
    let (codebook, rules) = load_inputs(args)?;
    let cache = PolicyCache::new(&args.cache);
    let assessments = assess_all(&codebook, &rules, Some(&cache), args.jobs as usize)?;
    let formats = if args.formats.is_empty() {
        vec![MatrixFormat::Markdown, MatrixFormat::Csv, MatrixFormat::Json]
    } else {
        args.formats.clone()
    };
    let head = header();
    let out = &args.out;
    for format in formats {
        let body = emit_matrix(&codebook, &assessments, format, args.reveal_names).map_err(config)?;
        let text = if format == MatrixFormat::Markdown { format!("{head}{body}") } else { body };
        write_file(&out.join(format!("matrix.{}", format.extension())), &text)?;
    }
    write_file(&out.join("smog_plot.csv"), &emit_smog_plot_csv(&codebook, &assessments).map_err(config)?)?;
    if !assessments.is_empty() {
        let summary = summarize(&assessments).map_err(config)?;
        write_file(&out.join("summary.md"), &format!("{head}{}", render_summary(&summary)))?;
        let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
        json.push('\n');
        write_file(&out.join("summary.json"), &json)?;
    }
    let apps_dir: PathBuf = out.join("apps");
    for a in &assessments {
        let report = emit_app_report(a, codebook.record(&a.app), args.reveal_names);
        write_file(&apps_dir.join(format!("{}.md", a.app)), &format!("{head}{report}"))?;
    }
    let accessible = assessments.iter().filter(|a| a.readability.is_some()).count();
    println!("audited {} apps ({accessible} accessible); reports written to {}", assessments.len(), out.display());
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let (codebook, rules) = load_inputs(&args.common)?;
    let expected = ExpectedTable::load(&args.expected).map_err(config)?;
    let assessments = assess_all(&codebook, &rules, None, args.common.jobs as usize)?;
    let report = verify_table(&assessments, &expected);
    print!("{report}");
    write_file(&args.common.out.join("verify.tsv"), &render_checks(&report))?;
    let failed = report.failures().count();
    if failed > 0 {
        return Err(CliError::VerifyFailed(failed));
    }
    println!("verification passed");
    Ok(())
}
