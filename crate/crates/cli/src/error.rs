use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: io::Error },

    #[error("numerical evaluation failed: {0}")]
    Numeric(subpoisson_core::Error),

    #[error("{failed} of {total} validation criteria failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Output { .. } => 2,
            CliError::Numeric(_) => 3,
            CliError::ChecksFailed { .. } => 4,
        }
    }
}

impl From<subpoisson_core::Error> for CliError {
    fn from(e: subpoisson_core::Error) -> Self {
        match e {
            subpoisson_core::Error::Config(msg) => CliError::Config(msg),
            other => CliError::Numeric(other),
        }
    }
}
