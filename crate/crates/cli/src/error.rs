use std::io;
use std::path::PathBuf;

use circhad_core::Error as CoreError;

/// Exit codes follow `sysexits.h`.
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_SOFTWARE: i32 = 70;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Cap(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("write failed: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Cap(_) => EXIT_SOFTWARE,
            CliError::Io { .. } | CliError::Output(_) => EXIT_IO,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::OrderTooLarge { .. } => CliError::Cap(msg),
            CoreError::Parse(_)
            | CoreError::ConventionMismatch(_)
            | CoreError::DimensionMismatch { .. }
            | CoreError::NotSign(_)
            | CoreError::UnluckyPrime(_) => CliError::Data(msg),
            _ => CliError::Usage(msg),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
