//! Privacy risk assessment of health-app privacy policies.
//!
//! Pipeline: [`ingest`] fetches and extracts policy text, [`detect`] finds
//! regulation mentions and privacy principles, [`readability`] grades the
//! text, [`score`] applies the five-element rubric and [`report`] renders
//! per-app and corpus outputs. [`corpus`] holds the app registry and the
//! reviewer annotations that override detection.

pub mod assess;
pub mod corpus;
pub mod detect;
pub mod dimension;
pub mod ingest;
pub mod readability;
pub mod report;
pub mod score;
pub mod text;
pub mod verify;

pub use assess::{analyze_app, AppAssessment, AssessError};
pub use corpus::{AnnotationSet, AppRecord, Codebook, Pseudonym};
pub use detect::{Finding, RuleSet};
pub use dimension::{DetectionDimension, Verdict, Verdicts};
pub use readability::{ReadabilityBand, ReadabilityResult};
pub use score::{PrafProfile, ScoringInput};
