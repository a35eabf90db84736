use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("shift index {k} out of range for dimension {n}")]
    ShiftOutOfRange { k: isize, n: usize },

    #[error("non-finite entry at position {index}")]
    NonFinite { index: usize },

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("singular triangular Toeplitz factor (|diagonal| = {magnitude:e})")]
    SingularFactor { magnitude: f64 },

    #[error("non-generic input at stage {stage}: {reason} (magnitude {magnitude:e})")]
    NonGeneric {
        stage: usize,
        reason: &'static str,
        magnitude: f64,
    },

    #[error("no convergence after {restarts} restarts (best relative residual {best_residual:e})")]
    NoConvergence { restarts: usize, best_residual: f64 },

    #[error("unsupported arity r = {0}: the linear-quadratic builder only handles r = 2, use gauss_newton_decompose")]
    UnsupportedArity(usize),

    #[error("degenerate closed-form parameters after {attempts} draws")]
    DegenerateParameters { attempts: usize },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("empty factor chain")]
    EmptyChain,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
