use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Numeric(#[from] swdl_core::Error),
    #[error("tolerance: {0}")]
    Tolerance(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    /// 1 I/O, 2 config, 3 numeric precondition, 4 tolerance or consistency.
    pub fn exit_code(&self) -> ExitCode {
        use swdl_core::Error as E;
        ExitCode::from(match self {
            CliError::Io(_) | CliError::Numeric(E::Io(_)) => 1,
            CliError::Config(_) | CliError::Numeric(E::Parse(_)) => 2,
            CliError::Tolerance(_) | CliError::Numeric(E::DecompositionMismatch { .. }) => 4,
            CliError::Numeric(_) => 3,
        })
    }
}
