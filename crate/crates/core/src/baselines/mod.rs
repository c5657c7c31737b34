//! Comparison imputers working on the hard binary codes.
//!
//! Every imputer returns a continuous `n × Q` matrix whose observed slots are
//! bit-identical to the input codes. Missing slots of the inputs to the SVD
//! and auto-encoder models are pre-filled with training column means.

mod autoencoder;
mod mean;
mod svd;

pub use autoencoder::{AutoencoderConfig, AutoencoderImputer};
pub use mean::{avg_impute, avg_impute_matrix, column_means, no_impute, prefill, restore_observed};
pub use svd::{pseudo_inverse, svd, Svd, SvdImputer, JACOBI_MAX_SWEEPS};

use thiserror::Error;

use crate::nn::NnError;

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error("dataset schema does not match the fitted imputer")]
    SchemaMismatch,
    #[error("matrix shape {got:?} does not match the expected {expected:?}")]
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("rank {rank} outside 1..={max}")]
    InvalidRank { rank: usize, max: usize },
    #[error("SVD did not converge after {sweeps} Jacobi sweeps")]
    NonConvergence { sweeps: usize },
    #[error("auto-encoder training diverged in epoch {epoch}")]
    Divergence { epoch: usize, losses: Vec<f64> },
    #[error("cannot fit on an empty training set")]
    EmptyTraining,
}
