//! Corpus-level counts, means and spreads.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::ReportError;
use crate::assess::AppAssessment;
use crate::corpus::Pseudonym;
use crate::dimension::DetectionDimension as D;
use crate::score::{PolicyAccess, PrafProfile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountStat {
    pub count: usize,
    /// Percent of all apps, one decimal.
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementStat {
    pub mean: f64,
    /// Population standard deviation (divides by N).
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extreme {
    pub score: u8,
    pub apps: Vec<Pseudonym>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionAgreement {
    pub dimension: D,
    /// Apps with both a detector verdict and a final verdict.
    pub compared: usize,
    pub agreed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub total_apps: usize,
    pub accessible_apps: usize,
    pub inaccessible: Vec<Pseudonym>,
    pub hipaa: CountStat,
    pub gdpr: CountStat,
    pub other_regulation: CountStat,
    /// Accessible apps mentioning no regulation at all. Inaccessible apps are
    /// listed separately and not counted here.
    pub no_regulation: CountStat,
    pub encryption: CountStat,
    pub access_control: CountStat,
    pub breach_protocol: CountStat,
    pub minimization: CountStat,
    pub retention: CountStat,
    pub consent: CountStat,
    pub third_party: CountStat,
    pub regulatory: ElementStat,
    pub security: ElementStat,
    pub usability: ElementStat,
    pub min_retention: ElementStat,
    pub third_party_score: ElementStat,
    pub overall: ElementStat,
    /// Mean SMOG grade over apps with a readability result.
    pub smog_mean: Option<f64>,
    /// Lowest and highest overall score among accessible apps.
    pub overall_min: Option<Extreme>,
    pub overall_max: Option<Extreme>,
    pub detector_agreement: Vec<DimensionAgreement>,
}

fn percent(count: usize, total: usize) -> f64 {
    (1000.0 * count as f64 / total as f64).round() / 10.0
}

/// Mean and population SD from integer sums, so the result does not depend
/// on input order.
fn element_stat(values: impl Iterator<Item = u8>) -> ElementStat {
    let (mut n, mut sum, mut sum_sq) = (0u64, 0u64, 0u64);
    for v in values {
        n += 1;
        sum += v as u64;
        sum_sq += (v as u64) * (v as u64);
    }
    let nf = n as f64;
    let var_scaled = (n * sum_sq - sum * sum) as f64;
    ElementStat { mean: sum as f64 / nf, sd: var_scaled.sqrt() / nf }
}

fn extreme(accessible: &[&PrafProfile], pick_max: bool) -> Option<Extreme> {
    let score = if pick_max {
        accessible.iter().map(|p| p.overall).max()?
    } else {
        accessible.iter().map(|p| p.overall).min()?
    };
    let mut apps: Vec<Pseudonym> = accessible.iter().filter(|p| p.overall == score).map(|p| p.app.clone()).collect();
    apps.sort();
    Some(Extreme { score, apps })
}

pub fn summarize(assessments: &[AppAssessment]) -> Result<CorpusSummary, ReportError> {
    let total = assessments.len();
    if total == 0 {
        return Err(ReportError::EmptyCorpus);
    }
    let count = |pred: &dyn Fn(&AppAssessment) -> bool| {
        let c = assessments.iter().filter(|a| pred(a)).count();
        CountStat { count: c, percent: percent(c, total) }
    };
    let yes = |dim: D| count(&|a: &AppAssessment| a.finding(dim).verdict.is_yes());
    let accessible: Vec<&PrafProfile> =
        assessments.iter().filter(|a| a.access == PolicyAccess::Accessible).map(|a| &a.profile).collect();
    let mut inaccessible: Vec<Pseudonym> =
        assessments.iter().filter(|a| a.access == PolicyAccess::Inaccessible).map(|a| a.app.clone()).collect();
    inaccessible.sort();
    let mut grades: Vec<f64> =
        assessments.iter().filter_map(|a| a.readability.as_ref().map(|r| r.smog_grade)).collect();
    grades.sort_by(f64::total_cmp);
    let smog_mean = (!grades.is_empty()).then(|| grades.iter().sum::<f64>() / grades.len() as f64);
    let stat = |f: fn(&PrafProfile) -> u8| element_stat(assessments.iter().map(|a| f(&a.profile)));

    let detector_agreement = D::ALL
        .into_iter()
        .map(|dim| {
            let pairs = assessments.iter().filter_map(|a| a.detected.map(|d| (d.get(dim), a.finding(dim).verdict)));
            let (compared, agreed) = pairs.fold((0, 0), |(c, g), (d, f)| (c + 1, g + usize::from(d == f)));
            DimensionAgreement { dimension: dim, compared, agreed }
        })
        .collect();

    Ok(CorpusSummary {
        total_apps: total,
        accessible_apps: accessible.len(),
        inaccessible,
        hipaa: yes(D::HipaaMention),
        gdpr: yes(D::GdprMention),
        other_regulation: yes(D::OtherRegulation),
        no_regulation: count(&|a: &AppAssessment| {
            a.access == PolicyAccess::Accessible && D::REGULATIONS.iter().all(|&d| !a.finding(d).verdict.is_yes())
        }),
        encryption: yes(D::DataEncryption),
        access_control: yes(D::AccessControls),
        breach_protocol: yes(D::BreachProtocol),
        minimization: yes(D::DataMinimization),
        retention: yes(D::RetentionTime),
        consent: yes(D::ConsentRequirements),
        third_party: yes(D::ThirdPartySharing),
        regulatory: stat(|p| p.regulatory),
        security: stat(|p| p.security),
        usability: stat(|p| p.usability),
        min_retention: stat(|p| p.min_retention),
        third_party_score: stat(|p| p.third_party),
        overall: stat(|p| p.overall),
        smog_mean,
        overall_min: extreme(&accessible, false),
        overall_max: extreme(&accessible, true),
        detector_agreement,
    })
}

fn join(apps: &[Pseudonym]) -> String {
    apps.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Markdown rendering of a summary.
pub fn render_summary(s: &CorpusSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Corpus summary\n");
    let _ = writeln!(out, "Apps audited: {} ({} accessible).", s.total_apps, s.accessible_apps);
    if !s.inaccessible.is_empty() {
        let _ = writeln!(out, "Inaccessible policies: {}.", join(&s.inaccessible));
    }
    let _ = writeln!(out, "\n## Criteria met\n");
    let _ = writeln!(out, "| Criterion | Apps | Percent |");
    let _ = writeln!(out, "|---|---:|---:|");
    let rows: [(&str, &CountStat); 11] = [
        ("HIPAA", &s.hipaa),
        ("GDPR", &s.gdpr),
        ("Other regulations", &s.other_regulation),
        ("No regulation mentioned\u{b9}", &s.no_regulation),
        ("Data encryption", &s.encryption),
        ("Access controls", &s.access_control),
        ("Breach protocol", &s.breach_protocol),
        ("Data minimization", &s.minimization),
        ("Retention time", &s.retention),
        ("Consent requirements", &s.consent),
        ("Third-party sharing disclosed", &s.third_party),
    ];
    for (label, c) in rows {
        let _ = writeln!(out, "| {label} | {} | {:.1}% |", c.count, c.percent);
    }
    let _ = writeln!(out, "\n\u{b9} Counts accessible policies only; inaccessible policies are listed above.\n");
    let _ = writeln!(out, "## Element scores\n");
    let _ = writeln!(out, "| Element | Mean | SD |");
    let _ = writeln!(out, "|---|---:|---:|");
    let elements: [(&str, &ElementStat); 6] = [
        ("Regulatory Compliance", &s.regulatory),
        ("Data Security", &s.security),
        ("Usability/Accessibility", &s.usability),
        ("Minimization/Retention", &s.min_retention),
        ("3rd-party Sharing", &s.third_party_score),
        ("Overall Risk", &s.overall),
    ];
    for (label, e) in elements {
        let _ = writeln!(out, "| {label} | {:.2} | {:.2} |", e.mean, e.sd);
    }
    let _ =
        writeln!(out, "\nMeans and SDs cover all apps; inaccessible apps contribute zeros. SD is the population SD.\n");
    if let Some(m) = s.smog_mean {
        let _ = writeln!(out, "Mean SMOG grade: {m:.2}.");
    }
    if let (Some(lo), Some(hi)) = (&s.overall_min, &s.overall_max) {
        let _ = writeln!(
            out,
            "Overall risk among accessible apps ranges from {} ({}) to {} ({}).",
            lo.score,
            join(&lo.apps),
            hi.score,
            join(&hi.apps)
        );
    }
    if s.detector_agreement.iter().any(|d| d.compared > 0) {
        let _ = writeln!(out, "\n## Detector agreement with final verdicts\n");
        let _ = writeln!(out, "| Dimension | Agreed | Compared |");
        let _ = writeln!(out, "|---|---:|---:|");
        for d in &s.detector_agreement {
            let _ = writeln!(out, "| {} | {} | {} |", d.dimension.title(), d.agreed, d.compared);
        }
    }
    out
}
