use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by corpus preparation, embedding handling, model
/// training, and experiment orchestration.
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("missing column {name:?} in {path}")]
    MissingColumn { path: PathBuf, name: String },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("class {label} has {count} statement(s), need at least 2 to split")]
    ClassTooSmall { label: u8, count: usize },

    #[error("split ratio must lie in (0, 1), got {0}")]
    InvalidRatio(f64),

    #[error("slang map {path}, line {line}: expected `token<TAB>replacement`")]
    SlangMapFormat { path: PathBuf, line: usize },

    #[error("{path}: dimension mismatch at line {line}: expected {expected}, found {found}")]
    DimensionMismatch {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("{path}: invalid number {field:?} at line {line}")]
    InvalidNumber {
        path: PathBuf,
        line: usize,
        field: String,
    },

    #[error("empty embedding file {path}")]
    EmptyEmbeddingFile { path: PathBuf },

    #[error("embedding table dimension {table} does not match requested dimension {requested}")]
    EmbeddingDimMismatch { requested: usize, table: usize },

    #[error("empty sequence")]
    EmptySequence,

    #[error("dropout rate must lie in [0, 1), got {0}")]
    InvalidDropoutRate(f64),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite loss at epoch {epoch}, batch {batch}")]
    NonFiniteLoss { epoch: usize, batch: usize },

    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// Whether the error indicates an internal failure (diverged training,
    /// corrupt state) rather than bad user input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::NonFiniteLoss { .. })
    }
}
