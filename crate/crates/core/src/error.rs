use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("excitation length {got} does not match geometry element count {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero excitation vector: directivity is undefined")]
    ZeroExcitation,

    #[error(
        "coupling matrix factorization failed after maximum diagonal jitter \
         (condition estimate {condition_estimate:.3e}): spacing too small for a stable solve"
    )]
    FactorizationFailure { condition_estimate: f64 },

    #[error(
        "quadrature not converged: doubling order {order} changed the result by \
         {residual:.3e} (tolerance {tol:.3e})"
    )]
    QuadratureNotConverged { order: usize, residual: f64, tol: f64 },

    #[error("power iteration stalled after {iterations} iterations")]
    PowerIterationStalled { iterations: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
