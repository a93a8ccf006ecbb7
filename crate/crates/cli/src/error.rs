use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const COUNTEREXAMPLE: i32 = 2;
    pub const PRECONDITION: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Library(#[from] qcircle::Error),

    #[error("{0}")]
    Precondition(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("writing output: {0}")]
    Output(#[from] io::Error),

    #[error("checkpoint {path} is corrupted: {reason}")]
    CorruptCheckpoint { path: PathBuf, reason: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(_) | CliError::Precondition(_) => exit::PRECONDITION,
            CliError::Io { .. } | CliError::Output(_) | CliError::CorruptCheckpoint { .. } => {
                exit::IO
            }
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
