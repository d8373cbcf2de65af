//! The per-app matrix: verdict marks, readability and scores, one row per app.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ReportError;
use crate::assess::AppAssessment;
use crate::corpus::{AppCategory, Codebook, Pseudonym};
use crate::dimension::{DetectionDimension, Verdict, Verdicts};
use crate::readability::ReadabilityBand;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixFormat {
    Markdown,
    Csv,
    Json,
}

impl MatrixFormat {
    pub fn extension(self) -> &'static str {
        match self {
            MatrixFormat::Markdown => "md",
            MatrixFormat::Csv => "csv",
            MatrixFormat::Json => "json",
        }
    }
}

impl FromStr for MatrixFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "markdown" | "md" => Ok(Self::Markdown),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format `{other}` (expected markdown, csv or json)")),
        }
    }
}

/// One matrix row in machine-readable form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub pseudonym: Pseudonym,
    pub category: AppCategory,
    pub hipaa: Verdict,
    pub gdpr: Verdict,
    pub other_regulation: Verdict,
    pub minimization: Verdict,
    pub encryption: Verdict,
    pub access_control: Verdict,
    pub consent: Verdict,
    pub retention: Verdict,
    pub breach: Verdict,
    pub ambiguous: Verdict,
    pub vague: Verdict,
    pub accessibility: Verdict,
    pub third_party: Verdict,
    pub smog_grade: Option<f64>,
    pub band: Option<ReadabilityBand>,
    pub regulatory_score: u8,
    pub security_score: u8,
    pub usability_score: u8,
    pub min_retention_score: u8,
    pub third_party_score: u8,
    pub overall_score: u8,
}

pub const CSV_COLUMNS: [&str; 23] = [
    "pseudonym",
    "category",
    "hipaa",
    "gdpr",
    "other_regulation",
    "minimization",
    "encryption",
    "access_control",
    "consent",
    "retention",
    "breach",
    "ambiguous",
    "vague",
    "accessibility",
    "third_party",
    "smog_grade",
    "band",
    "regulatory_score",
    "security_score",
    "usability_score",
    "min_retention_score",
    "third_party_score",
    "overall_score",
];

impl MatrixRow {
    pub fn from_assessment(a: &AppAssessment) -> Self {
        let v = a.verdicts();
        let p = &a.profile;
        Self {
            pseudonym: a.app.clone(),
            category: a.category,
            hipaa: v.get(DetectionDimension::HipaaMention),
            gdpr: v.get(DetectionDimension::GdprMention),
            other_regulation: v.get(DetectionDimension::OtherRegulation),
            minimization: v.get(DetectionDimension::DataMinimization),
            encryption: v.get(DetectionDimension::DataEncryption),
            access_control: v.get(DetectionDimension::AccessControls),
            consent: v.get(DetectionDimension::ConsentRequirements),
            retention: v.get(DetectionDimension::RetentionTime),
            breach: v.get(DetectionDimension::BreachProtocol),
            ambiguous: v.get(DetectionDimension::AmbiguousLanguage),
            vague: v.get(DetectionDimension::VagueCommitments),
            accessibility: v.get(DetectionDimension::AccessibilityAccommodations),
            third_party: v.get(DetectionDimension::ThirdPartySharing),
            smog_grade: a.readability.as_ref().map(|r| r.smog_grade),
            band: a.readability.as_ref().map(|r| r.band),
            regulatory_score: p.regulatory,
            security_score: p.security,
            usability_score: p.usability,
            min_retention_score: p.min_retention,
            third_party_score: p.third_party,
            overall_score: p.overall,
        }
    }

    /// Verdicts in dimension order.
    pub fn verdicts(&self) -> Verdicts {
        let marks = [
            self.hipaa,
            self.gdpr,
            self.other_regulation,
            self.minimization,
            self.encryption,
            self.access_control,
            self.consent,
            self.retention,
            self.breach,
            self.ambiguous,
            self.vague,
            self.accessibility,
            self.third_party,
        ];
        DetectionDimension::ALL.into_iter().zip(marks).collect()
    }

    pub fn scores(&self) -> [u8; 6] {
        [
            self.regulatory_score,
            self.security_score,
            self.usability_score,
            self.min_retention_score,
            self.third_party_score,
            self.overall_score,
        ]
    }

    fn csv_fields(&self) -> Vec<String> {
        let mut out = vec![self.pseudonym.to_string(), self.category.key().to_string()];
        out.extend(self.verdicts().iter().map(|(_, v)| v.as_str().to_string()));
        out.push(self.smog_grade.map(|g| g.to_string()).unwrap_or_default());
        out.push(self.band.map(|b| b.code().to_string()).unwrap_or_default());
        out.extend(self.scores().iter().map(u8::to_string));
        out
    }
}

/// SMOG grade as printed in the markdown table: one decimal, no trailing `.0`.
pub fn format_grade(grade: f64) -> String {
    let s = format!("{grade:.1}");
    s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
}

fn rows_in_codebook_order<'a>(
    codebook: &Codebook,
    assessments: &'a [AppAssessment],
) -> Result<Vec<&'a AppAssessment>, ReportError> {
    if codebook.records.len() != assessments.len() {
        return Err(ReportError::RowMismatch {
            detail: format!("{} codebook records but {} assessments", codebook.records.len(), assessments.len()),
        });
    }
    codebook
        .records
        .iter()
        .map(|r| {
            assessments
                .iter()
                .find(|a| a.app == r.pseudonym)
                .ok_or_else(|| ReportError::RowMismatch { detail: format!("no assessment for {}", r.pseudonym) })
        })
        .collect()
}

/// Render the matrix. Rows follow codebook order. Real names are added as a
/// `name` column only when `reveal_names` is set.
pub fn emit_matrix(
    codebook: &Codebook,
    assessments: &[AppAssessment],
    format: MatrixFormat,
    reveal_names: bool,
) -> Result<String, ReportError> {
    let ordered = rows_in_codebook_order(codebook, assessments)?;
    let name_of = |app: &Pseudonym| -> Option<String> {
        if !reveal_names {
            return None;
        }
        Some(codebook.record(app)?.real_name.as_ref()?.reveal().to_string())
    };
    let rows: Vec<(MatrixRow, Option<String>)> =
        ordered.iter().map(|a| (MatrixRow::from_assessment(a), name_of(&a.app))).collect();
    Ok(match format {
        MatrixFormat::Markdown => markdown(&rows, reveal_names),
        MatrixFormat::Csv => csv_text(&rows, reveal_names),
        MatrixFormat::Json => json_text(&rows),
    })
}

fn markdown(rows: &[(MatrixRow, Option<String>)], reveal: bool) -> String {
    let mut out = String::new();
    let name_head = if reveal { " Name |" } else { "" };
    let name_rule = if reveal { "---|" } else { "" };
    let _ = writeln!(
        out,
        "| App |{name_head} Category | HIPAA | GDPR | Others | Minimization | Encryption | Access | Consent | Retention | Breach | Ambiguous | Vague | Accessibility | 3rd-party | SMOG | Level | Regulatory | Security | Usability | Min/Retention | 3rd-party Score | Overall |"
    );
    let _ = writeln!(out, "|---|{name_rule}---|{}", ":-:|".repeat(13) + "---:|---|---:|---:|---:|---:|---:|---:|");
    for (row, name) in rows {
        let mut line = format!("| {} |", row.pseudonym);
        if reveal {
            let _ = write!(line, " {} |", name.as_deref().unwrap_or(""));
        }
        let _ = write!(line, " {} |", row.category.label());
        for (_, v) in row.verdicts().iter() {
            let _ = write!(line, " {} |", v.glyph());
        }
        let _ = write!(
            line,
            " {} | {} |",
            row.smog_grade.map(format_grade).unwrap_or_else(|| "-".into()),
            row.band.map(|b| b.code()).unwrap_or("-")
        );
        for s in row.scores() {
            let _ = write!(line, " {s} |");
        }
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("\n● = yes, ○ = partial, − = no. Levels: SD slightly difficult, SWD somewhat difficult, FD fairly difficult, D difficult, VD very difficult, P professional.\n");
    out
}

fn csv_text(rows: &[(MatrixRow, Option<String>)], reveal: bool) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
    if reveal {
        header.insert(1, "name");
    }
    w.write_record(&header).expect("in-memory write");
    for (row, name) in rows {
        let mut fields = row.csv_fields();
        if reveal {
            fields.insert(1, name.clone().unwrap_or_default());
        }
        w.write_record(&fields).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn json_text(rows: &[(MatrixRow, Option<String>)]) -> String {
    let values: Vec<serde_json::Value> = rows
        .iter()
        .map(|(row, name)| {
            let mut v = serde_json::to_value(row).expect("row serializes");
            if let (Some(n), Some(obj)) = (name, v.as_object_mut()) {
                obj.insert("name".into(), serde_json::Value::String(n.clone()));
            }
            v
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&values).expect("rows serialize");
    s.push('\n');
    s
}

pub fn parse_matrix_csv(text: &str) -> Result<Vec<MatrixRow>, ReportError> {
    let parse_err = |e: csv::Error| ReportError::Parse(e.to_string());
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().map_err(parse_err)?.clone();
    let grade_col = headers.iter().position(|h| h == "smog_grade");
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(parse_err)?;
        let mut row: MatrixRow = record.deserialize(Some(&headers)).map_err(parse_err)?;
        // The reader's float inference is not exact in the last digit.
        if let Some(field) = grade_col.and_then(|i| record.get(i)).filter(|f| !f.is_empty()) {
            row.smog_grade = Some(field.parse().map_err(|e| ReportError::Parse(format!("smog_grade: {e}")))?);
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn parse_matrix_json(text: &str) -> Result<Vec<MatrixRow>, ReportError> {
    serde_json::from_str(text).map_err(|e| ReportError::Parse(e.to_string()))
}

/// `pseudonym,smog_grade` for every app with a grade, for plotting.
pub fn emit_smog_plot_csv(codebook: &Codebook, assessments: &[AppAssessment]) -> Result<String, ReportError> {
    let ordered = rows_in_codebook_order(codebook, assessments)?;
    let mut out = String::from("pseudonym,smog_grade\n");
    for a in ordered {
        if let Some(r) = &a.readability {
            let _ = writeln!(out, "{},{}", a.app, r.smog_grade);
        }
    }
    Ok(out)
}
