//! Files, configuration and the command implementations behind the binary.

mod commands;
mod config;
mod manifest;
mod schema_file;
mod table;

pub use commands::{
    cmd_benchmark, cmd_impute, cmd_inspect_schema, cmd_losses, cmd_train, load_model, run_command, save_model,
    write_trace, Command, CommandOutcome, LoadedData,
};
pub use config::RunConfig;
pub use manifest::{replay, Manifest, OutputDigest, ReplayReport, MANIFEST_FILE};
pub use schema_file::{format_schema, parse_schema, read_schema};
pub use table::{
    binarize_labels, read_table, read_table_file, write_table, CellParseError, Table, LABEL_SEPARATOR,
};

use std::path::Path;

use thiserror::Error;

use crate::codec::CodecError;
use crate::eval::EvalError;
use crate::gain::GainError;
use crate::nn::NnError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error("I/O error: {0}")]
    Io(String),
    #[error("schema line {line}: {message}")]
    SchemaLine { line: usize, message: String },
    #[error("{0} cannot be written to a schema file")]
    Unrepresentable(String),
    #[error("data columns do not match the schema (missing: {missing:?}, unexpected: {unexpected:?})")]
    Columns { missing: Vec<String>, unexpected: Vec<String> },
    #[error("{} malformed cell(s), first at row {}, column `{}`: {}", .0.len(), .0[0].row, .0[0].column, .0[0].message)]
    Cells(Vec<CellParseError>),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("labels: {0}")]
    Labels(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error(transparent)]
    Gain(#[from] GainError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl IoError {
    pub(crate) fn file(path: &Path, e: std::io::Error) -> Self {
        IoError::File {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for IoError {
    fn from(e: std::io::Error) -> Self {
        IoError::Io(e.to_string())
    }
}
