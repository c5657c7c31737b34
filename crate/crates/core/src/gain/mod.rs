//! Categorical generative adversarial imputation.
//!
//! The generator sees the coded row with its missing blocks filled by random
//! seeds plus the coded mask, and emits one softmax head per multiclass
//! feature and one sigmoid head per multilabel / numeric feature. Observed
//! blocks are copied back over its output before the discriminator sees it.
//!
//! The discriminator sees that mixed row plus a hint vector (the coded mask
//! with a few whole feature blocks neutralised to 0.5) and predicts one
//! "is observed" probability per *feature*, not per category.

mod impute;
mod losses;
mod model;
mod sampling;
mod train;

pub use impute::{impute, records_to_binary, CellAgreement, ImputationResult, NUMERIC_AGREEMENT_WINDOW};
pub use losses::{
    loss_d, loss_d_grad, loss_g, loss_g_grad, loss_sim, loss_sim_grad,
};
pub use model::{generator_input, GainModel, GainParams};
pub use sampling::{hinted_feature_count, sample_hints, sample_seeds};
pub use train::{
    discriminator_gradients, generator_gradients, train, Batch, EpochLosses, TrainConfig, TrainTrace,
};

use thiserror::Error;

use crate::codec::CodecError;
use crate::nn::NnError;

#[derive(Debug, Error)]
pub enum GainError {
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("dataset schema does not match the model schema")]
    SchemaMismatch,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cannot train on an empty dataset")]
    EmptyDataset,
    #[error("training diverged in epoch {epoch} ({} completed epochs recorded)", trace.len())]
    Divergence { epoch: usize, trace: TrainTrace },
}
