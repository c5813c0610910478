//! Failure classes and their process exit codes.

use subspec::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed or invalid input: exit 2.
    #[error("input error: {0}")]
    Input(String),
    /// Numerical failure of a valid problem: exit 3.
    #[error("solver error: {0}")]
    Solver(String),
    /// Non-unique reconstruction under `--strict`: exit 4.
    #[error("non-unique reconstruction: {0}")]
    NonUnique(String),
    /// Output could not be written: exit 1.
    #[error("write error: {0}")]
    Write(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Write(_) => 1,
            CliError::Input(_) => 2,
            CliError::Solver(_) => 3,
            CliError::NonUnique(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NormalizationViolation(_)
            | Error::CommonRoot { .. }
            | Error::DimensionMismatch { .. }
            | Error::ParityMismatch(_)
            | Error::DuplicateEigenvalue { .. }
            | Error::InvalidInput(_) => CliError::Input(e.to_string()),
            Error::StepFailure { .. }
            | Error::RootLoss { .. }
            | Error::PoleProximity { .. }
            | Error::IllConditioned { .. }
            | Error::RankDeficient { .. } => CliError::Solver(e.to_string()),
        }
    }
}
