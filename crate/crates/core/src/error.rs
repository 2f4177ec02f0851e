use thiserror::Error;

/// Errors raised by alphabet, function, space and monoid operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("alphabet has no nonzero value")]
    NoNonzeroValue,
    #[error("negative value {0}")]
    NegativeValue(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("value {0} is not in the alphabet")]
    ValueNotInAlphabet(String),
    #[error("index {index} out of range for alphabet of size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("not total: no image for {0}")]
    NotTotal(String),
    #[error("image outside alphabet: {0}")]
    ImageOutsideAlphabet(String),
    #[error("contradictory images for {0}")]
    ContradictoryPair(String),
    #[error("alphabet mismatch")]
    AlphabetMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("space is not a metric")]
    NotMetric,
    #[error("{what} exceeds safety limit {limit}")]
    LimitExceeded { what: String, limit: u64 },
    #[error("not a submonoid: {0}")]
    NotSubmonoid(String),
    #[error("base space does not realize every alphabet value")]
    BaseNotCovering,
    #[error("arithmetic overflow while scaling {0}")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
