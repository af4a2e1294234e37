use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong inside the pipeline.
///
/// The variants split into two families: validation problems (bad
/// configuration, bad arguments) and data problems (unreadable or malformed
/// inputs, too little data for an analysis). The CLI maps them to distinct
/// exit codes via [`Error::is_validation`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("training text for '{language}' has {found} characters, at least {minimum} are required")]
    CorpusTooSmall {
        language: String,
        found: usize,
        minimum: usize,
    },

    #[error("post {post_id}: {message}")]
    Annotation { post_id: String, message: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(origin: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            origin: origin.into(),
            line,
            message: message.into(),
        }
    }

    /// True for configuration and argument errors, false for data errors.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Config(_) | Error::InvalidArgument(_))
    }
}
