use thiserror::Error;

/// Errors reported by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "matrix is not Hermitian: asymmetry {asymmetry:.3e} exceeds tolerance {tolerance:.3e}"
    )]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("non-finite entry in {0}")]
    NonFiniteEntry(String),

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    #[error("evaluation point {lambda} is within tolerance of pole {pole}")]
    PoleEvaluation { lambda: f64, pole: f64 },

    #[error(
        "eigenvalue count mismatch: expected {expected}, found {real} real (with multiplicity) \
         and {pairs} conjugate pair(s)"
    )]
    CountMismatch {
        expected: usize,
        real: usize,
        pairs: usize,
    },

    #[error("interval census matches no interlacing case: {0}")]
    Unclassifiable(String),

    #[error("sign assignment ambiguous at eigenvalue {eigenvalue}: margin {margin:.3e}")]
    AmbiguousSign { eigenvalue: f64, margin: f64 },

    #[error("canonical form invariant violated: {0}")]
    CanonicalViolation(String),

    #[error("polynomial root iteration did not converge within {iterations} iterations")]
    OracleDivergence { iterations: usize },

    #[error("trajectory derivative undefined at tangency: |g'({eigenvalue}) - 1| = {margin:.3e}")]
    TangencyDerivative { eigenvalue: f64, margin: f64 },

    #[error("invalid spectral form: {0}")]
    InvalidSpectralForm(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sweep failed at a = {a}: {source}")]
    SweepFailure {
        a: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
