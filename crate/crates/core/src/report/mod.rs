//! Reports: corpus matrix, summary statistics, per-app narratives.

mod app;
mod matrix;
mod summary;

pub use app::{emit_app_report, excerpt, EXCERPT_LIMIT};
pub use matrix::{
    emit_matrix, emit_smog_plot_csv, format_grade, parse_matrix_csv, parse_matrix_json, MatrixFormat, MatrixRow,
    CSV_COLUMNS,
};
pub use summary::{render_summary, summarize, CorpusSummary, CountStat, DimensionAgreement, ElementStat, Extreme};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("cannot summarize an empty corpus")]
    EmptyCorpus,
    #[error("matrix rows do not match the codebook: {detail}")]
    RowMismatch { detail: String },
    #[error("cannot parse matrix: {0}")]
    Parse(String),
}
