//! Dense feed-forward networks with hand-written backpropagation.
//!
//! Only what the fixed architectures in this crate need: fully connected
//! layers, relu / tanh / sigmoid / per-block softmax activations, exact
//! gradients, and an Adam optimiser. Everything works on minibatches stored as
//! row-major [`Matrix`](crate::linalg::Matrix) values, one sample per row.

mod activation;
mod adam;
mod layer;
mod mlp;
pub mod persist;

pub use activation::{sigmoid, Activation, HeadBlock, HeadKind};
pub use adam::{Adam, AdamConfig};
pub use layer::{DenseLayer, LayerGrads};
pub use mlp::{ForwardCache, Mlp, MlpGrads};

use thiserror::Error;

/// Probabilities are clamped into `[PROB_EPS, 1 - PROB_EPS]` before any log.
pub const PROB_EPS: f64 = 1e-7;

#[inline]
pub fn clamp_prob(p: f64) -> f64 {
    p.clamp(PROB_EPS, 1.0 - PROB_EPS)
}

#[derive(Debug, Error)]
pub enum NnError {
    #[error("{context}: expected width {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("forward cache does not belong to this network: {0}")]
    StaleCache(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid layer stack: {0}")]
    InvalidArchitecture(String),
    #[error("model file: {0}")]
    Format(String),
    #[error("model was saved for schema {found}, expected {expected}")]
    SchemaMismatch { expected: String, found: String },
    #[error("model file I/O: {0}")]
    Io(#[from] std::io::Error),
}
