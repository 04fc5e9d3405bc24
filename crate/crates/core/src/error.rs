use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("row {row}, column {column}: cannot parse {value:?} as a finite number")]
    BadCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}: expected {expected} columns, found {found}")]
    ColumnCount {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("label column {0:?} not found")]
    UnknownColumn(String),

    #[error("no data rows")]
    EmptyData,

    #[error("empty input")]
    EmptyInput,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("instance {id} has a non-finite value in dimension {dim}")]
    NonFinite { id: usize, dim: usize },

    #[error("duplicate instance id {0}")]
    DuplicateId(usize),

    #[error("unknown instance id {0}")]
    UnknownId(usize),

    #[error("label {0} is not part of the label set")]
    UnknownLabel(u32),

    #[error("members of a prototype must share one label")]
    MixedLabels,

    #[error("instance {0} has no enemy (only one class present)")]
    NoEnemy(usize),

    #[error("k = {k} requires more than {required} points, got {available}")]
    TooFewPoints {
        k: usize,
        required: usize,
        available: usize,
    },

    #[error("cannot split {size} instances into {folds} folds")]
    TooManyFolds { folds: usize, size: usize },

    #[error("reduced size {reduced} exceeds original size {original}")]
    InvalidSizes { original: usize, reduced: usize },

    #[error("unknown selector {0:?} (expected one of none, enn, drop3, icf, lssm, lsbo)")]
    UnknownSelector(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
