use thiserror::Error;

/// Errors raised by state construction and the geometric operations built on it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid rank {rank} for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("basis carries no bipartite labels")]
    Label,

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("capacity exceeded: {entries} entries requested, limit is {limit}")]
    Capacity { entries: u128, limit: u128 },

    #[error("family evaluation failed at theta={theta:?}: {reason}")]
    FamilyEvaluation { theta: Vec<f64>, reason: String },

    #[error("state is not pure (||rho^2 - rho|| = {0:e})")]
    NotPure(f64),

    #[error("non-finite value: {0}")]
    Numeric(String),

    #[error("malformed state file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
