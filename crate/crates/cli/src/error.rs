use std::path::Path;

use thiserror::Error;

/// CLI failure modes, mapped onto the exit-code contract:
/// usage and parse problems exit 2, everything else exits 1.
#[derive(Error, Debug)]
pub enum CliError {
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn parse(path: &Path, line: usize, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.display().to_string(),
            line,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Io(_) | CliError::Internal(_) => 1,
        }
    }
}
