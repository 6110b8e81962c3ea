//! Base-space bookkeeping: the dimension and the ordered basis of coordinate planes.

use crate::{Error, Result};

/// Smallest supported base dimension.
pub const MIN_DIMENSION: usize = 2;
/// Largest supported base dimension. Dense `(0, 4)`-tensor storage grows like
/// `n^4`, and every plane basis below stays tiny (`28` planes at `n = 8`).
pub const MAX_DIMENSION: usize = 8;

/// Dimension context for a Euclidean space `R^n` equipped with its standard
/// orthonormal basis `e_0, ..., e_{n-1}`.
///
/// Every tensor in this crate carries a `SpaceContext`, and binary operations
/// require the contexts to agree. The context also fixes the ordered basis of
/// coordinate planes `e_i ∧ e_j` (`i < j`, lexicographic), which indexes the
/// rows and columns of curvature operators and the slices of hat tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceContext {
    n: usize,
}

impl SpaceContext {
    pub fn new(n: usize) -> Result<Self> {
        if !(MIN_DIMENSION..=MAX_DIMENSION).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        Ok(SpaceContext { n })
    }

    /// Base dimension `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of coordinate planes `n (n - 1) / 2`, i.e. `dim Λ²(R^n)`.
    pub fn plane_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Coordinate planes `(i, j)` with `i < j`, lexicographically ordered.
    pub fn planes(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    /// Position of the plane `(i, j)` in [`SpaceContext::planes`] order.
    pub fn plane_index(&self, i: usize, j: usize) -> Result<usize> {
        if i >= j || j >= self.n {
            return Err(Error::InvalidPair { i, j, n: self.n });
        }
        Ok(i * self.n - i * (i + 1) / 2 + (j - i - 1))
    }

    /// Plane at position `alpha` in [`SpaceContext::planes`] order.
    ///
    /// # Panics
    /// Panics if `alpha >= plane_count()`.
    pub fn plane_at(&self, alpha: usize) -> (usize, usize) {
        self.planes()
            .nth(alpha)
            .expect("plane index out of range")
    }
}
