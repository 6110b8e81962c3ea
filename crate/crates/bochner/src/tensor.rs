//! Dense covariant tensors on `R^n`, alternating forms, and the derivation
//! action of skew-symmetric endomorphisms.
//!
//! Components are stored densely in row-major order (last index fastest), so a
//! `(0, k)`-tensor holds `n^k` entries. This is deliberate: the toolkit targets
//! small dimensions where exhaustive index loops are both fast and easy to
//! audit against the defining formulas.

use crate::space::SpaceContext;
use crate::{Error, Result};

/// Largest supported tensor arity. Curvature tensors are `(0, 4)`.
pub const MAX_ARITY: usize = 4;

/// Absolute-per-unit-scale tolerance used by structural checks that assert an
/// exact algebraic identity (antisymmetry, skewness, symmetry).
pub const EXACT_TOL: f64 = 1e-12;

/// A dense real-valued `(0, k)`-tensor on `R^n`, `0 <= k <= 4`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    ctx: SpaceContext,
    arity: usize,
    components: Vec<f64>,
}

fn check_arity(arity: usize) -> Result<()> {
    if arity > MAX_ARITY {
        return Err(Error::InvalidArgument(format!(
            "arity {arity} exceeds the supported maximum {MAX_ARITY}"
        )));
    }
    Ok(())
}

impl DenseTensor {
    /// The zero tensor of the given arity.
    pub fn zeros(ctx: SpaceContext, arity: usize) -> Result<Self> {
        check_arity(arity)?;
        let len = ctx.n().pow(arity as u32);
        Ok(DenseTensor {
            ctx,
            arity,
            components: vec![0.0; len],
        })
    }

    /// Builds a tensor from `n^arity` row-major components (last index fastest).
    /// Every entry must be finite.
    pub fn from_components(ctx: SpaceContext, arity: usize, components: Vec<f64>) -> Result<Self> {
        check_arity(arity)?;
        let expected = ctx.n().pow(arity as u32);
        if components.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "expected {expected} components for an arity-{arity} tensor in dimension {}, got {}",
                ctx.n(),
                components.len()
            )));
        }
        if let Some(bad) = components.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvariantViolation(format!(
                "non-finite tensor component {bad}"
            )));
        }
        Ok(DenseTensor {
            ctx,
            arity,
            components,
        })
    }

    /// Internal constructor for components produced by our own arithmetic.
    pub(crate) fn from_raw(ctx: SpaceContext, arity: usize, components: Vec<f64>) -> Self {
        debug_assert_eq!(components.len(), ctx.n().pow(arity as u32));
        DenseTensor {
            ctx,
            arity,
            components,
        }
    }

    pub fn ctx(&self) -> SpaceContext {
        self.ctx
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub(crate) fn components_mut(&mut self) -> &mut [f64] {
        &mut self.components
    }

    /// Row-major strides: `stride[m] = n^(arity - 1 - m)`.
    pub(crate) fn strides(&self) -> [usize; MAX_ARITY] {
        let n = self.ctx.n();
        let mut s = [0usize; MAX_ARITY];
        let mut acc = 1;
        for m in (0..self.arity).rev() {
            s[m] = acc;
            acc *= n;
        }
        s
    }

    fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.arity);
        let n = self.ctx.n();
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < n);
            acc * n + i
        })
    }

    /// Component at a multi-index (length must equal the arity).
    pub fn get(&self, idx: &[usize]) -> f64 {
        self.components[self.flat_index(idx)]
    }

    pub(crate) fn set(&mut self, idx: &[usize], value: f64) {
        let f = self.flat_index(idx);
        self.components[f] = value;
    }

    /// Full Euclidean inner product: the sum of componentwise products over
    /// all `n^k` multi-indices.
    pub fn inner(&self, other: &DenseTensor) -> Result<f64> {
        if self.ctx != other.ctx || self.arity != other.arity {
            return Err(Error::DimensionMismatch(format!(
                "inner product requires matching shape: (n = {}, k = {}) vs (n = {}, k = {})",
                self.ctx.n(),
                self.arity,
                other.ctx.n(),
                other.arity
            )));
        }
        Ok(self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn norm_sq(&self) -> f64 {
        self.components.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        DenseTensor {
            ctx: self.ctx,
            arity: self.arity,
            components: self.components.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &DenseTensor) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    fn combine(&self, other: &DenseTensor, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.ctx != other.ctx || self.arity != other.arity {
            return Err(Error::DimensionMismatch(
                "tensor addition requires matching shape".into(),
            ));
        }
        Ok(DenseTensor {
            ctx: self.ctx,
            arity: self.arity,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }

    /// Tensor product; the combined arity must stay within [`MAX_ARITY`].
    pub fn outer(&self, other: &DenseTensor) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::DimensionMismatch(
                "tensor product requires a shared space".into(),
            ));
        }
        check_arity(self.arity + other.arity)?;
        let mut components = Vec::with_capacity(self.components.len() * other.components.len());
        for a in &self.components {
            for b in &other.components {
                components.push(a * b);
            }
        }
        Ok(DenseTensor {
            ctx: self.ctx,
            arity: self.arity + other.arity,
            components,
        })
    }

    /// Full antisymmetrization `(1/k!) Σ_σ sign(σ) T(X_{σ(1)}, ..., X_{σ(k)})`.
    ///
    /// Total on every arity; the projection fixes alternating tensors and
    /// kills symmetric directions. See [`antisymmetrize`] for the checked
    /// wrapper that returns an [`AlternatingForm`].
    pub fn alternation(&self) -> Self {
        if self.arity <= 1 {
            return self.clone();
        }
        let perms = signed_permutations(self.arity);
        let inv_count = 1.0 / perms.len() as f64;
        let mut out = vec![0.0; self.components.len()];
        let mut idx = [0usize; MAX_ARITY];
        let mut permuted = [0usize; MAX_ARITY];
        for (f, slot) in out.iter_mut().enumerate() {
            decode_index(f, self.ctx.n(), self.arity, &mut idx);
            let mut acc = 0.0;
            for (perm, sign) in &perms {
                for (m, &p) in perm.iter().enumerate() {
                    permuted[m] = idx[p];
                }
                acc += sign * self.get(&permuted[..self.arity]);
            }
            *slot = acc * inv_count;
        }
        DenseTensor::from_raw(self.ctx, self.arity, out)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }
}

/// Writes the digits of `flat` in base `n` (most significant first) into `out`.
pub(crate) fn decode_index(flat: usize, n: usize, arity: usize, out: &mut [usize; MAX_ARITY]) {
    let mut rest = flat;
    for m in (0..arity).rev() {
        out[m] = rest % n;
        rest /= n;
    }
}

/// All permutations of `0..k` with their signs. `k <= 4`, so at most 24 entries.
pub(crate) fn signed_permutations(k: usize) -> Vec<(Vec<usize>, f64)> {
    fn build(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, f64)>) {
        let k = used.len();
        if prefix.len() == k {
            let mut inversions = 0;
            for a in 0..k {
                for b in a + 1..k {
                    if prefix[a] > prefix[b] {
                        inversions += 1;
                    }
                }
            }
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            out.push((prefix.clone(), sign));
            return;
        }
        for v in 0..k {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                build(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    build(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// All strictly increasing index tuples of length `ell` drawn from `0..n`.
pub(crate) fn combinations(n: usize, ell: usize) -> Vec<Vec<usize>> {
    fn build(start: usize, n: usize, ell: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == ell {
            out.push(prefix.clone());
            return;
        }
        for v in start..n {
            prefix.push(v);
            build(v + 1, n, ell, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    build(0, n, ell, &mut Vec::new(), &mut out);
    out
}

/// An alternating `ℓ`-form, `1 <= ℓ <= n - 1`, stored as its dense tensor.
///
/// The inner product and norm are inherited from [`DenseTensor`], i.e. they
/// sum over *all* `n^ℓ` index tuples (so `|e^0 ∧ e^1|² = 2`).
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingForm {
    tensor: DenseTensor,
}

impl AlternatingForm {
    /// Wraps a tensor after checking that it is antisymmetric in every
    /// adjacent pair of slots (tolerance `1e-12` per unit of magnitude) and
    /// that its degree lies in `1..=n-1`.
    pub fn new(tensor: DenseTensor) -> Result<Self> {
        let ell = tensor.arity();
        let n = tensor.ctx().n();
        if ell == 0 || ell >= n {
            return Err(Error::InvalidArgument(format!(
                "form degree must lie in 1..={} in dimension {n}, got {ell}",
                n - 1
            )));
        }
        let tol = EXACT_TOL * tensor.max_abs().max(1.0);
        let strides = tensor.strides();
        let mut idx = [0usize; MAX_ARITY];
        for f in 0..tensor.components().len() {
            decode_index(f, n, ell, &mut idx);
            for m in 0..ell.saturating_sub(1) {
                // Swapping adjacent slots m, m+1 must flip the sign.
                let delta = idx[m + 1] as isize - idx[m] as isize;
                let swapped = (f as isize + delta * strides[m] as isize
                    - delta * strides[m + 1] as isize) as usize;
                let residual = tensor.components()[f] + tensor.components()[swapped];
                if residual.abs() > tol {
                    return Err(Error::InvariantViolation(format!(
                        "tensor is not antisymmetric: residual {residual:e} at flat index {f}, slots {m}/{}",
                        m + 1
                    )));
                }
            }
        }
        Ok(AlternatingForm { tensor })
    }

    /// The basis form `e^{i_0} ∧ ... ∧ e^{i_{ℓ-1}}` for strictly increasing
    /// indices, with components `sign(σ)` on permutations of the index set.
    pub fn basis(ctx: SpaceContext, indices: &[usize]) -> Result<Self> {
        let ell = indices.len();
        if ell == 0 || ell >= ctx.n() {
            return Err(Error::InvalidArgument(format!(
                "form degree must lie in 1..={} in dimension {}, got {ell}",
                ctx.n() - 1,
                ctx.n()
            )));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) || indices.iter().any(|&i| i >= ctx.n()) {
            return Err(Error::InvalidArgument(format!(
                "basis form indices must be strictly increasing and < {}, got {indices:?}",
                ctx.n()
            )));
        }
        let mut tensor = DenseTensor::zeros(ctx, ell)?;
        let mut arranged = [0usize; MAX_ARITY];
        for (perm, sign) in signed_permutations(ell) {
            for (m, &p) in perm.iter().enumerate() {
                arranged[m] = indices[p];
            }
            tensor.set(&arranged[..ell], sign);
        }
        Ok(AlternatingForm { tensor })
    }

    /// Assembles a form from coefficients over the strictly increasing basis
    /// tuples in [`combinations`] order: `ω = Σ_I coeff_I e^{I}`.
    pub fn from_wedge_coefficients(
        ctx: SpaceContext,
        ell: usize,
        coefficients: &[f64],
    ) -> Result<Self> {
        if ell == 0 || ell >= ctx.n() {
            return Err(Error::InvalidArgument(format!(
                "form degree must lie in 1..={} in dimension {}, got {ell}",
                ctx.n() - 1,
                ctx.n()
            )));
        }
        let combos = combinations(ctx.n(), ell);
        if coefficients.len() != combos.len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} wedge coefficients, got {}",
                combos.len(),
                coefficients.len()
            )));
        }
        let mut tensor = DenseTensor::zeros(ctx, ell)?;
        let mut arranged = [0usize; MAX_ARITY];
        let perms = signed_permutations(ell);
        for (combo, &coeff) in combos.iter().zip(coefficients) {
            for (perm, sign) in &perms {
                for (m, &p) in perm.iter().enumerate() {
                    arranged[m] = combo[p];
                }
                tensor.set(&arranged[..ell], sign * coeff);
            }
        }
        Ok(AlternatingForm { tensor })
    }

    pub fn degree(&self) -> usize {
        self.tensor.arity()
    }

    pub fn ctx(&self) -> SpaceContext {
        self.tensor.ctx()
    }

    pub fn tensor(&self) -> &DenseTensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> DenseTensor {
        self.tensor
    }

    pub fn norm_sq(&self) -> f64 {
        self.tensor.norm_sq()
    }
}

/// Antisymmetrizes a tensor and wraps the result as an [`AlternatingForm`].
///
/// The projection itself is total (see [`DenseTensor::alternation`]); the
/// wrapper fails only when the arity cannot be a valid form degree, i.e.
/// `arity = 0` or `arity >= n`.
pub fn antisymmetrize(tensor: &DenseTensor) -> Result<AlternatingForm> {
    AlternatingForm::new(tensor.alternation())
}

/// A skew-symmetric endomorphism of `R^n`, i.e. an element of `so(n) = Λ²`.
///
/// Entries follow the convention `mat[row][col] = ⟨L e_col, e_row⟩`, so
/// columns hold images of basis vectors. The inner product declares the
/// coordinate-plane generators [`SkewEndomorphism::wedge`] orthonormal:
/// `⟨A, B⟩ = Σ_{i<j} ⟨A e_i, e_j⟩ ⟨B e_i, e_j⟩`, which is half the Frobenius
/// pairing of the matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewEndomorphism {
    ctx: SpaceContext,
    mat: Vec<f64>,
}

impl SkewEndomorphism {
    /// Validates `n x n` row-major entries: finite and skew within `1e-12`
    /// per unit of magnitude.
    pub fn new(ctx: SpaceContext, mat: Vec<f64>) -> Result<Self> {
        let n = ctx.n();
        if mat.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for an endomorphism of R^{n}, got {}",
                n * n,
                mat.len()
            )));
        }
        if let Some(bad) = mat.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvariantViolation(format!(
                "non-finite matrix entry {bad}"
            )));
        }
        let scale: f64 = mat.iter().fold(1.0f64, |m, c| m.max(c.abs()));
        for r in 0..n {
            for c in 0..=r {
                let residual = mat[r * n + c] + mat[c * n + r];
                if residual.abs() > EXACT_TOL * scale {
                    return Err(Error::InvariantViolation(format!(
                        "matrix is not skew-symmetric: entry ({r}, {c}) residual {residual:e}"
                    )));
                }
            }
        }
        Ok(SkewEndomorphism { ctx, mat })
    }

    /// The plane rotation generator `e_i ∧ e_j` (`i < j`): sends `e_i` to
    /// `e_j`, `e_j` to `-e_i`, and kills the orthogonal complement.
    pub fn wedge(ctx: SpaceContext, i: usize, j: usize) -> Result<Self> {
        let n = ctx.n();
        if i >= j || j >= n {
            return Err(Error::InvalidPair { i, j, n });
        }
        let mut mat = vec![0.0; n * n];
        mat[j * n + i] = 1.0;
        mat[i * n + j] = -1.0;
        Ok(SkewEndomorphism { ctx, mat })
    }

    pub fn ctx(&self) -> SpaceContext {
        self.ctx
    }

    /// Entry `⟨L e_col, e_row⟩`.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.mat[row * self.ctx.n() + col]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.mat
    }

    /// Plane-basis inner product (half the Frobenius pairing).
    pub fn inner(&self, other: &SkewEndomorphism) -> Result<f64> {
        if self.ctx != other.ctx {
            return Err(Error::DimensionMismatch(
                "inner product requires a shared space".into(),
            ));
        }
        let n = self.ctx.n();
        let mut acc = 0.0;
        for (i, j) in self.ctx.planes() {
            acc += self.mat[j * n + i] * other.mat[j * n + i];
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self).expect("same context")
    }

    /// Derivation action on `(0, k)`-tensors:
    /// `(L T)(X_1, ..., X_k) = -Σ_m T(X_1, ..., L X_m, ..., X_k)`.
    ///
    /// A `(0, 0)`-tensor is annihilated. The action is the differential of the
    /// pullback by `exp(-tL)`, hence skew-adjoint: `⟨L T, T⟩ = 0`.
    pub fn act(&self, tensor: &DenseTensor) -> Result<DenseTensor> {
        if self.ctx != tensor.ctx() {
            return Err(Error::DimensionMismatch(
                "derivation action requires a shared space".into(),
            ));
        }
        let n = self.ctx.n();
        let k = tensor.arity();
        let comps = tensor.components();
        let mut out = vec![0.0; comps.len()];
        if k == 0 {
            return Ok(DenseTensor::from_raw(self.ctx, 0, out));
        }
        let strides = tensor.strides();
        let mut idx = [0usize; MAX_ARITY];
        for (f, slot) in out.iter_mut().enumerate() {
            decode_index(f, n, k, &mut idx);
            let mut acc = 0.0;
            for m in 0..k {
                let base = f - idx[m] * strides[m];
                for j in 0..n {
                    let coeff = self.mat[j * n + idx[m]];
                    if coeff != 0.0 {
                        acc -= coeff * comps[base + j * strides[m]];
                    }
                }
            }
            *slot = acc;
        }
        Ok(DenseTensor::from_raw(self.ctx, k, out))
    }
}

/// Specialized derivation action of the plane generator `e_r ∧ e_s` (`r < s`).
///
/// Agrees with `SkewEndomorphism::wedge(ctx, r, s)?.act(t)` but exploits the
/// two-entry sparsity, running in `O(k n^k)` with no comparisons in the inner
/// loop.
pub(crate) fn wedge_act(r: usize, s: usize, tensor: &DenseTensor) -> DenseTensor {
    let ctx = tensor.ctx();
    let n = ctx.n();
    let k = tensor.arity();
    let comps = tensor.components();
    let mut out = vec![0.0; comps.len()];
    if k == 0 {
        return DenseTensor::from_raw(ctx, 0, out);
    }
    let strides = tensor.strides();
    for m in 0..k {
        let stride = strides[m];
        let block = stride * n;
        let outer = comps.len() / block;
        for a in 0..outer {
            let base = a * block;
            let base_r = base + r * stride;
            let base_s = base + s * stride;
            for b in 0..stride {
                // Slot m equal to r: -T(..., s at m, ...); equal to s: +T(..., r at m, ...).
                out[base_r + b] -= comps[base_s + b];
                out[base_s + b] += comps[base_r + b];
            }
        }
    }
    DenseTensor::from_raw(ctx, k, out)
}
