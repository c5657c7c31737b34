//! Adversarial imputation of missing categorical tabular data.
//!
//! Categorical features are binary coded and then re-encoded as *fuzzy* codes
//! that keep the category information recoverable by argmax / thresholding
//! while living in the same domain as softmax and sigmoid outputs. A GAIN-style
//! generator/discriminator pair is trained on the fuzzy codes, and the trained
//! generator produces multiple stochastic completions of the missing cells.
//!
//! The crate also carries the comparison imputers (column mean, low-rank SVD
//! reconstruction, tanh auto-encoder) and a cross-validated benchmark harness
//! that scores every imputer by downstream ridge logistic regression.
//!
//! Module map:
//!
//! * [`codec`] – schemas, records, binary / fuzzy coding, masks, decoding
//! * [`nn`] – dense layers with manual backpropagation and Adam
//! * [`gain`] – the categorical GAIN model, training and multiple imputation
//! * [`baselines`] – mean, SVD and auto-encoder imputers
//! * [`eval`] – masking, folds, logistic regression, metrics, benchmark runner
//! * [`io`] – schema/CSV files, run configuration, manifests, commands

pub mod baselines;
pub mod codec;
pub mod eval;
pub mod gain;
pub mod io;
pub mod linalg;
pub mod nn;
pub mod rng;
pub mod synthetic;

mod error;

pub use error::{Error, Result};
