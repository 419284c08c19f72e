use std::io;

use quatfact::clifford::CliffordError;
use quatfact::factorize::FactorError;
use quatfact::{DvrError, EichlerError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("{0} verification check(s) failed")]
    VerificationFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Overflow(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl From<DvrError> for CliError {
    fn from(e: DvrError) -> Self {
        match e {
            DvrError::Parse(_) => CliError::Parse(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<EichlerError> for CliError {
    fn from(e: EichlerError) -> Self {
        match e {
            EichlerError::TooManyAtoms(_) => CliError::Overflow(e.to_string()),
            EichlerError::Dvr(d) => d.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<FactorError<EichlerError>> for CliError {
    fn from(e: FactorError<EichlerError>) -> Self {
        match e {
            FactorError::Provider(p) => p.into(),
            FactorError::Overflow(_) => CliError::Overflow(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<CliffordError> for CliError {
    fn from(e: CliffordError) -> Self {
        match e {
            CliffordError::Dvr(d) => d.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}
