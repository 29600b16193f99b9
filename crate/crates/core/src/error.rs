use thiserror::Error;

/// Errors raised by the core computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid game: {0}")]
    InvalidGame(String),

    /// Every coefficient of the gain polynomial is zero; the draw is degenerate.
    #[error("all coefficients of the gain polynomial are zero")]
    AllCoefficientsZero,

    #[error("effective correlation {0} lies outside the model range [0, 1]")]
    OutOfModelRange(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("covariance matrix is not positive semidefinite (pivot {pivot} at index {index})")]
    NotPsd { index: usize, pivot: f64 },

    /// Adaptive quadrature ran out of subdivisions. The partial value and its
    /// error bound are carried so callers can still report them.
    #[error("quadrature did not converge after {subdivisions} subdivisions (value {value}, error estimate {est_error})")]
    ConvergenceFailure {
        value: f64,
        est_error: f64,
        subdivisions: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
