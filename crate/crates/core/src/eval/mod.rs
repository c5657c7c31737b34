//! Cross-validated benchmark of imputers by downstream classification.
//!
//! Cells are masked completely at random, imputers are fitted on the masked
//! training fold only, a ridge logistic regression is fitted on the imputed
//! training fold, and the imputed test fold is scored by accuracy and AUROC.

mod benchmark;
mod folds;
mod logreg;
mod masking;
mod metrics;
mod report;

pub use benchmark::{
    audit_leakage, evaluate_fold, perturb_rows, run_benchmark, Aggregation, BenchmarkConfig, FoldContext,
    FoldOutcome, LeakageAudit, Method, run_benchmark_with_jobs,
};
pub use folds::kfold_split;
pub use logreg::{LogisticRegression, LOGREG_MAX_ITER, LOGREG_TOL};
pub use masking::{mask_dataset, MaskedCell, MaskingPlan};
pub use metrics::{accuracy, auroc, mean_sd, most_popular_scores, random_scores};
pub use report::{CellError, EvalReport, ReportMetadata, ReportRow};

use thiserror::Error;

use crate::baselines::BaselineError;
use crate::codec::CodecError;
use crate::gain::GainError;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Gain(#[from] GainError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error("cannot split {n} rows into {k} folds")]
    TooFewRows { n: usize, k: usize },
    #[error("length mismatch: {0}")]
    Length(String),
    #[error("AUROC is undefined when only one class is present")]
    SingleClass,
    #[error("labels must be 0 or 1")]
    InvalidLabel,
    #[error("non-finite feature value")]
    NonFinite,
    #[error("logistic regression did not converge in {iterations} iterations (gradient norm {grad_norm:e})")]
    NonConvergence { iterations: usize, grad_norm: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
