//! Binary and fuzzy binary coding of categorical records.
//!
//! A record of `p` features becomes a vector of width `Q = Σ q_j`, one block
//! per feature. Multiclass blocks are one-hot and get fuzzified so that the
//! active entry stays the strict maximum; multilabel blocks are multi-hot and
//! get fuzzified around the 0.5 threshold. Decoding inverts both exactly.

mod coding;
mod dataset;
mod record;
mod schema;

pub use coding::{
    build_masks, collapse_mask, decode, encode_binary, fuzzify_block, fuzzify_multiclass,
    fuzzify_multilabel, MULTILABEL_THRESHOLD,
};
pub use dataset::{encode_dataset, Coding, FuzzyDataset};
pub use record::{Cell, RawRecord};
pub use schema::{FeatureKind, FeatureSchema, FeatureSpec};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodecError {
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("feature `{feature}`: {reason}")]
    SchemaViolation { feature: String, reason: String },
    #[error("record has {got} cells but the schema declares {expected} features")]
    RecordWidth { expected: usize, got: usize },
    #[error("cannot fuzzify: {0}")]
    Encoding(String),
    #[error("{} invalid record(s); first at row {}: {}", .0.len(), .0[0].0, .0[0].1)]
    Rows(Vec<(usize, CodecError)>),
}
