use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series is not invertible at zero (need a_0 = 0 and a_1 != 0)")]
    NotInvertibleAtZero,
    #[error("expected an odd series")]
    ParityError,
    #[error("parity violated at degree {0}")]
    ParityViolated(usize),
    #[error("argument list too short: need {needed}, got {got}")]
    ArityError { needed: usize, got: usize },
    #[error("size guard: {0}")]
    SizeGuard(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("normalization degenerate: abs series vanishes at the scale point")]
    NormalizationDegenerate,
    #[error("2F1 diverges at |x| = 1 (need c > a + b)")]
    DivergentAtBoundary,
    #[error("2F1 parameter c is a non-positive integer")]
    ParameterPole,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("abs-inverse stays below 1 on [0, {0}]; no root")]
    NoRootInRange(f64),
    #[error("inverse-series sign condition fails at degree {0}")]
    SignConditionUnverified(usize),
    #[error("|rho| = 1 is not allowed for Mehler quadrature")]
    BoundaryRho,
    #[error("matrix is singular")]
    Singular,
    #[error("reversion self-check failed at degree {0}")]
    ReversionCheck(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeGuard(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
