use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid `{key}`: {message}")]
    Validation { key: String, message: String },

    #[error("missing section [{0}]")]
    MissingSection(&'static str),

    #[error(transparent)]
    Engine(#[from] spinlab_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub(crate) fn validation(key: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation { key: key.into(), message: message.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// Process exit code: 2 config, 3 numerical invariant, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(e) if e.is_numerical() => 3,
            CliError::Io { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
