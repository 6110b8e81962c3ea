use thiserror::Error;

/// Errors reported by constructors and operations when an input falls outside
/// its documented domain or breaks a structural invariant.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Base dimension outside the supported range.
    #[error("unsupported dimension n = {0}: supported range is 2..=8")]
    UnsupportedDimension(usize),

    /// Operands live on different spaces or have incompatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A coordinate-plane index pair that is not strictly increasing and in range.
    #[error("invalid index pair ({i}, {j}) in dimension {n}: require 0 <= i < j < n")]
    InvalidPair { i: usize, j: usize, n: usize },

    /// A scalar or structural argument outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A constructor invariant failed (symmetry, first Bianchi identity, finiteness, ...).
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// A stated hypothesis of a criterion fails on the given input.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
