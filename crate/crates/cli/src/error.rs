use thiserror::Error;

/// Command-line failures, partitioned by exit code: 2 for anything wrong
/// with the input (usage, parse, validation, I/O), 3 for internal numerical
/// failures.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Validation(minkspec_core::Error),
    #[error("{0}")]
    Numerical(minkspec_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("verification failed:\n{0}")]
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Validation(_) | CliError::Io(_) => {
                2
            }
            CliError::Numerical(_) | CliError::Verify(_) => 3,
        }
    }
}

impl From<minkspec_core::Error> for CliError {
    fn from(e: minkspec_core::Error) -> Self {
        use minkspec_core::Error::*;
        match e {
            DimensionMismatch(_)
            | NotHermitian { .. }
            | NonFiniteEntry(_)
            | InvalidSpectralForm(_)
            | InvalidParameter(_)
            | PoleEvaluation { .. } => CliError::Validation(e),
            ConvergenceFailure { .. }
            | CountMismatch { .. }
            | Unclassifiable(_)
            | AmbiguousSign { .. }
            | CanonicalViolation(_)
            | OracleDivergence { .. }
            | TangencyDerivative { .. }
            | SweepFailure { .. } => CliError::Numerical(e),
        }
    }
}
