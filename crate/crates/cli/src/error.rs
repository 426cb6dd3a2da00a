use thiserror::Error;

/// CLI failures, each tied to one exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numeric failure: {0}")]
    Numeric(pplane::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<pplane::Error> for CliError {
    /// Bad parameters that only the library can detect are still usage
    /// errors; everything else it reports is a numeric failure.
    fn from(e: pplane::Error) -> Self {
        match e {
            pplane::Error::Domain { .. } | pplane::Error::FamilyMismatch(_) => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
