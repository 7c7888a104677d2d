use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong while loading, mining or evaluating.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller handed in a value that breaks an operation's precondition.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported format header {found:?}, expected {expected:?}")]
    Version { found: String, expected: String },

    #[error("duplicate object id {0:?}")]
    DuplicateObject(String),

    #[error("unknown object id {0:?}")]
    UnknownObject(String),

    /// The brute-force oracle refuses instances that exceed its limits.
    #[error("{dimension} is {actual}, limit is {limit}")]
    LimitExceeded {
        dimension: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
