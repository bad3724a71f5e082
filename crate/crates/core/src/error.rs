use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("I/O error: {0}")]
    Stream(#[from] std::io::Error),

    #[error("malformed input at row {row}: {message}")]
    MalformedRow { row: usize, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("line {line}: missing required field `{field}`")]
    MissingField { line: usize, field: String },

    #[error("line {line}: label must be 0 or 1, got {value}")]
    InvalidLabel { line: usize, value: String },

    #[error("insufficient {class} pairs: need {required}, have {available}")]
    InsufficientPool {
        class: &'static str,
        required: usize,
        available: usize,
    },

    #[error("invalid split plan: {0}")]
    InvalidPlan(String),

    #[error("cannot fit TF-IDF on an empty corpus")]
    EmptyCorpus,

    #[error("threshold tuning needs at least one positive and one negative label")]
    DegenerateLabels,

    #[error("threshold {0} outside [0, 1]")]
    InvalidThreshold(f64),

    #[error("tfidf_cosine matcher requires a fitted model")]
    MissingModel,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{predictions} predictions but {labels} labels")]
    LengthMismatch { predictions: usize, labels: usize },

    #[error("prediction for unknown pair_id `{0}`")]
    UnmatchedPairId(String),

    #[error("duplicate pair_id `{0}`")]
    DuplicatePairId(String),

    #[error("aggregation needs at least 2 runs, got {0}")]
    TooFewRuns(usize),

    #[error("dataset has {len} pairs, need at least {min}")]
    DatasetTooSmall { len: usize, min: usize },

    #[error("pair `{pair_id}`: {side} title {reason}")]
    InvalidTitle {
        pair_id: String,
        side: &'static str,
        reason: &'static str,
    },

    #[error("manifest does not match dataset: {0}")]
    ManifestMismatch(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
