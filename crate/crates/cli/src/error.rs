use std::process::ExitCode;

use skat_core::Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Core(#[from] Error),

    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },

    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) | CliError::Read { .. } => 1,
            CliError::Invalid(_) | CliError::Write(_) => 2,
            CliError::Core(e) => match e {
                Error::BudgetExceeded { .. } => 3,
                Error::UnknownVariable(_)
                | Error::OverlappingSets(_)
                | Error::EmptySet
                | Error::NotEavesdropper(_)
                | Error::NotHonest(_)
                | Error::SymbolOutOfRange { .. }
                | Error::InvalidArgument(_)
                | Error::Parse(_) => 1,
                _ => 2,
            },
        })
    }
}
