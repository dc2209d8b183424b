use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates its admissible range.
    #[error("invalid parameter `{name}`: {constraint} (got {value})")]
    InvalidParameter {
        name: &'static str,
        constraint: &'static str,
        value: f64,
    },

    /// A special-function argument is outside the domain.
    #[error("domain error in {function}: {message}")]
    Domain {
        function: &'static str,
        message: String,
    },

    /// Newton polishing of polynomial zeros did not converge.
    #[error("zero polishing did not converge for root {index} (last step {last_step:e})")]
    Convergence { index: usize, last_step: f64 },

    /// An iterative eigen-solver exhausted its iteration budget.
    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    EigenConvergence { iterations: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Cholesky factorization failed; the input is not positive definite.
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    /// Stieltjes procedure produced a vanishing norm.
    #[error("orthogonal polynomial recurrence broke down at degree {degree} (norm {norm:e})")]
    Breakdown { degree: usize, norm: f64 },

    #[error("invalid sampler configuration: {0}")]
    Config(String),

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
