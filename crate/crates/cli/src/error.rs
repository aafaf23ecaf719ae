use std::path::Path;

use dsm::DsmError;
use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{0}")]
    Compute(#[from] DsmError),

    #[error("malformed data file {path}: {msg}")]
    Data { path: String, msg: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn data(path: &Path, msg: impl Into<String>) -> Self {
        CliError::Data {
            path: path.display().to_string(),
            msg: msg.into(),
        }
    }

    /// 0 success, 1 verification failure, 2 usage or configuration error,
    /// 3 I/O error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Config(_) | CliError::Compute(_) | CliError::Data { .. } => 2,
            CliError::Io { .. } => 3,
        }
    }
}
