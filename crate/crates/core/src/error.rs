use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input contains no data rows")]
    EmptyInput,

    #[error("row {row}: expected {expected} columns, found {found}")]
    RaggedRow {
        row: u64,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {column}: {value:?} is not a finite number")]
    BadCell {
        row: u64,
        column: usize,
        value: String,
    },

    #[error("label column {0} not found")]
    MissingLabelColumn(String),

    #[error("dataset rows must share one dimension >= 1")]
    BadDimension,

    #[error("self-distance requested for point {0}")]
    SelfDistance(usize),

    #[error("point index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("no eligible point remains for the query from point {0}")]
    NoEligiblePoint(usize),

    #[error("target cluster count {k} exceeds available {available}")]
    TooManyClusters { k: usize, available: usize },

    #[error("target cluster count must be at least 1")]
    ZeroClusters,

    #[error("partitions have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("normalized mutual information is undefined for two single-cluster partitions")]
    UndefinedNmi,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
