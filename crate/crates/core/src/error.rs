use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown game `{0}`")]
    UnknownGame(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: String, reason: String },

    #[error("exact traversal exceeded the node budget of {budget} nodes")]
    NodeBudgetExceeded { budget: usize },

    #[error("architecture signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("empty population")]
    EmptyPopulation,

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("config error at `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error("malformed input {file}: {reason}")]
    MalformedInput { file: String, reason: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            name: name.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
