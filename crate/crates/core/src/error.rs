use thiserror::Error;

use crate::dsl::{EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("unknown catalog metric '{0}'")]
    UnknownMetric(String),

    #[error("metric '{name}' is not defined for n = {n}: {reason}")]
    InvalidDimension {
        name: String,
        n: usize,
        reason: &'static str,
    },

    #[error("metric matrix is singular (condition estimate {cond:e})")]
    Singular { cond: f64 },

    #[error("metric matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("metric matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("degenerate plane: vectors are linearly dependent")]
    DegeneratePlane,

    #[error("zero tangent vector")]
    ZeroVector,

    #[error("quantity expected to be real has imaginary part {imag:e}")]
    NonReal { imag: f64 },

    #[error("inadmissible point: {0}")]
    InadmissiblePoint(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
