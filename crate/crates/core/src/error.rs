use thiserror::Error;

/// Errors produced by the numerical kernels and the verification harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("matrix is rank deficient (smallest/largest Gram eigenvalue = {ratio:e})")]
    RankDeficient { ratio: f64 },

    #[error("matrix is not positive definite (smallest/largest eigenvalue = {ratio:e})")]
    NotPositiveDefinite { ratio: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("per-sample log-weight {log_weight} exceeds the overflow limit")]
    Overflow { log_weight: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
