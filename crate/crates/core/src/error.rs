//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("coefficient query {what} lies outside the truncation {trunc}")]
    OutOfTruncation { what: String, trunc: String },

    #[error("weight mismatch: |{0}| != |{1}|")]
    WeightMismatch(String, String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),

    #[error("t-window overflow: {0}")]
    WindowOverflow(String),

    #[error("not a genuine representation: {0}")]
    NonGenuine(String),

    #[error("divergent composition: {0}")]
    Divergent(String),

    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),

    #[error("malformed series data: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
