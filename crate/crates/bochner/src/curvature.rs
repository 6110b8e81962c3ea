//! Algebraic curvature tensors and the operators the Bochner technique builds
//! from them: the curvature operator on two-forms, the hat lift of a tensor
//! into `Λ² ⊗ (0, k)`-space, the Weitzenböck curvature term, and the
//! scalar/traceless-Ricci/Weyl decomposition.
//!
//! Conventions, fixed once and used everywhere:
//!
//! * the metric is the identity (all bases orthonormal);
//! * coordinate planes `e_i ∧ e_j` (`i < j`) form an *orthonormal* basis of
//!   `Λ²`, so the plane inner product is half the Frobenius pairing of skew
//!   matrices (see [`SkewEndomorphism`]);
//! * `⟨R(X, Y) Z, W⟩ = Rm(X, Y, Z, W)`, and curvature acts on tensors as the
//!   derivation `(R(X, Y) T)(Z_1, ...) = -Σ_m T(Z_1, ..., R(X, Y) Z_m, ...)`.
//!
//! Under these conventions the Weitzenböck term of a one-form on the unit
//! round metric model (`Rm = ½ g ⊙ g`) is `(n - 1) ω`, with a positive sign.

use crate::space::SpaceContext;
use crate::tensor::{wedge_act, DenseTensor, EXACT_TOL, MAX_ARITY};
use crate::{Error, Result};

/// Relative tolerance for the symmetry/Bianchi residual accepted by
/// [`CurvatureTensor::new`], measured against the tensor norm.
pub const CURVATURE_RESIDUAL_TOL: f64 = 1e-9;

/// A symmetric bilinear form on `R^n`, stored as a dense `n x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricBilinear {
    ctx: SpaceContext,
    mat: Vec<f64>,
}

impl SymmetricBilinear {
    /// Validates `n x n` row-major entries: finite and symmetric within
    /// `1e-12` per unit of magnitude.
    pub fn new(ctx: SpaceContext, mat: Vec<f64>) -> Result<Self> {
        let n = ctx.n();
        if mat.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a bilinear form on R^{n}, got {}",
                n * n,
                mat.len()
            )));
        }
        if let Some(bad) = mat.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvariantViolation(format!(
                "non-finite bilinear form entry {bad}"
            )));
        }
        let scale: f64 = mat.iter().fold(1.0f64, |m, c| m.max(c.abs()));
        for r in 0..n {
            for c in 0..r {
                let residual = mat[r * n + c] - mat[c * n + r];
                if residual.abs() > EXACT_TOL * scale {
                    return Err(Error::InvariantViolation(format!(
                        "bilinear form is not symmetric: entry ({r}, {c}) residual {residual:e}"
                    )));
                }
            }
        }
        Ok(SymmetricBilinear { ctx, mat })
    }

    pub(crate) fn from_raw(ctx: SpaceContext, mat: Vec<f64>) -> Self {
        debug_assert_eq!(mat.len(), ctx.n() * ctx.n());
        SymmetricBilinear { ctx, mat }
    }

    /// The metric itself: the identity matrix.
    pub fn metric(ctx: SpaceContext) -> Self {
        let n = ctx.n();
        let mut mat = vec![0.0; n * n];
        for i in 0..n {
            mat[i * n + i] = 1.0;
        }
        SymmetricBilinear { ctx, mat }
    }

    pub fn zeros(ctx: SpaceContext) -> Self {
        SymmetricBilinear {
            ctx,
            mat: vec![0.0; ctx.n() * ctx.n()],
        }
    }

    pub fn from_diagonal(ctx: SpaceContext, diag: &[f64]) -> Result<Self> {
        let n = ctx.n();
        if diag.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n} diagonal entries, got {}",
                diag.len()
            )));
        }
        let mut mat = vec![0.0; n * n];
        for (i, &d) in diag.iter().enumerate() {
            if !d.is_finite() {
                return Err(Error::InvariantViolation(format!(
                    "non-finite diagonal entry {d}"
                )));
            }
            mat[i * n + i] = d;
        }
        Ok(SymmetricBilinear { ctx, mat })
    }

    pub fn ctx(&self) -> SpaceContext {
        self.ctx
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.mat[row * self.ctx.n() + col]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        let n = self.ctx.n();
        (0..n).map(|i| self.mat[i * n + i]).sum()
    }

    /// Full Frobenius pairing `Σ_{ij} a_ij b_ij` (the `(0, 2)`-tensor inner
    /// product, *not* halved).
    pub fn inner(&self, other: &SymmetricBilinear) -> Result<f64> {
        if self.ctx != other.ctx {
            return Err(Error::DimensionMismatch(
                "inner product requires a shared space".into(),
            ));
        }
        Ok(self.mat.iter().zip(&other.mat).map(|(a, b)| a * b).sum())
    }

    pub fn norm_sq(&self) -> f64 {
        self.mat.iter().map(|x| x * x).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        SymmetricBilinear {
            ctx: self.ctx,
            mat: self.mat.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn sub(&self, other: &SymmetricBilinear) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::DimensionMismatch(
                "subtraction requires a shared space".into(),
            ));
        }
        Ok(SymmetricBilinear {
            ctx: self.ctx,
            mat: self
                .mat
                .iter()
                .zip(&other.mat)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// An algebraic curvature tensor: a `(0, 4)`-tensor with
///
/// * `Rm(x, y, z, w) = -Rm(y, x, z, w) = -Rm(x, y, w, z) = Rm(z, w, x, y)`,
/// * the first Bianchi identity
///   `Rm(x, y, z, w) + Rm(y, z, x, w) + Rm(z, x, y, w) = 0`.
///
/// Construction checks both exhaustively; the residual must stay below
/// `1e-9 · |Rm|`. Use [`CurvatureTensor::project`] to repair noisy input by
/// orthogonal projection onto the space of algebraic curvature tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    tensor: DenseTensor,
}

impl CurvatureTensor {
    pub fn new(tensor: DenseTensor) -> Result<Self> {
        if tensor.arity() != 4 {
            return Err(Error::InvalidArgument(format!(
                "curvature tensors have arity 4, got {}",
                tensor.arity()
            )));
        }
        let residual = curvature_residual(&tensor);
        let tol = CURVATURE_RESIDUAL_TOL * tensor.norm();
        if residual > tol {
            return Err(Error::InvariantViolation(format!(
                "curvature symmetry/Bianchi residual {residual:e} exceeds {tol:e} \
                 (1e-9 per unit of tensor norm)"
            )));
        }
        Ok(CurvatureTensor { tensor })
    }

    /// Wraps components produced by arithmetic that preserves the symmetries
    /// exactly (Kulkarni–Nomizu products, linear combinations of validated
    /// tensors), skipping the exhaustive re-check.
    pub(crate) fn from_parts(tensor: DenseTensor) -> Self {
        debug_assert_eq!(tensor.arity(), 4);
        CurvatureTensor { tensor }
    }

    /// Orthogonal projection of an arbitrary `(0, 4)`-tensor onto the space of
    /// algebraic curvature tensors: first onto pair-symmetric tensors
    /// (averaging over the eight sign-respecting slot symmetries), then along
    /// the fully antisymmetric directions to enforce the Bianchi identity.
    pub fn project(tensor: &DenseTensor) -> Result<Self> {
        if tensor.arity() != 4 {
            return Err(Error::InvalidArgument(format!(
                "curvature tensors have arity 4, got {}",
                tensor.arity()
            )));
        }
        let n = tensor.ctx().n();
        let t = tensor.components();
        let idx = |x: usize, y: usize, z: usize, w: usize| ((x * n + y) * n + z) * n + w;

        // Average over the symmetry group of the pair structure.
        let mut sym = vec![0.0; t.len()];
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        sym[idx(x, y, z, w)] = (t[idx(x, y, z, w)] - t[idx(y, x, z, w)]
                            - t[idx(x, y, w, z)]
                            + t[idx(y, x, w, z)]
                            + t[idx(z, w, x, y)]
                            - t[idx(w, z, x, y)]
                            - t[idx(z, w, y, x)]
                            + t[idx(w, z, y, x)])
                            / 8.0;
                    }
                }
            }
        }
        // Remove the fully antisymmetric part: b(R)/3 with
        // b(R)(x,y,z,w) = R(x,y,z,w) + R(y,z,x,w) + R(z,x,y,w).
        let mut out = vec![0.0; t.len()];
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        let b = sym[idx(x, y, z, w)] + sym[idx(y, z, x, w)] + sym[idx(z, x, y, w)];
                        out[idx(x, y, z, w)] = sym[idx(x, y, z, w)] - b / 3.0;
                    }
                }
            }
        }
        CurvatureTensor::new(DenseTensor::from_raw(tensor.ctx(), 4, out))
    }

    pub fn zeros(ctx: SpaceContext) -> Self {
        CurvatureTensor {
            tensor: DenseTensor::zeros(ctx, 4).expect("arity 4 is supported"),
        }
    }

    /// The constant-curvature model `Rm = (κ/2) g ⊙ g`, whose sectional
    /// curvatures all equal `κ` and whose curvature operator is `κ · Id`.
    pub fn constant_curvature(ctx: SpaceContext, kappa: f64) -> Self {
        let g = SymmetricBilinear::metric(ctx);
        kulkarni_nomizu(&g, &g)
            .expect("shared context")
            .scaled(kappa / 2.0)
    }

    pub fn ctx(&self) -> SpaceContext {
        self.tensor.ctx()
    }

    pub fn tensor(&self) -> &DenseTensor {
        &self.tensor
    }

    pub fn get(&self, x: usize, y: usize, z: usize, w: usize) -> f64 {
        self.tensor.get(&[x, y, z, w])
    }

    pub fn norm(&self) -> f64 {
        self.tensor.norm()
    }

    pub fn norm_sq(&self) -> f64 {
        self.tensor.norm_sq()
    }

    pub fn inner(&self, other: &CurvatureTensor) -> Result<f64> {
        self.tensor.inner(&other.tensor)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        CurvatureTensor {
            tensor: self.tensor.scaled(factor),
        }
    }

    pub fn add(&self, other: &CurvatureTensor) -> Result<Self> {
        Ok(CurvatureTensor {
            tensor: self.tensor.add(&other.tensor)?,
        })
    }

    pub fn sub(&self, other: &CurvatureTensor) -> Result<Self> {
        Ok(CurvatureTensor {
            tensor: self.tensor.sub(&other.tensor)?,
        })
    }

    /// Ricci contraction `Ric(x, y) = Σ_j Rm(x, e_j, y, e_j)`, symmetrized so
    /// the result is exactly symmetric in floating point.
    pub fn ricci(&self) -> SymmetricBilinear {
        let n = self.ctx().n();
        let mut mat = vec![0.0; n * n];
        for x in 0..n {
            for y in 0..n {
                let mut acc = 0.0;
                for j in 0..n {
                    acc += 0.5 * (self.get(x, j, y, j) + self.get(y, j, x, j));
                }
                mat[x * n + y] = acc;
            }
        }
        SymmetricBilinear::from_raw(self.ctx(), mat)
    }

    /// Scalar curvature: the trace of the Ricci contraction.
    pub fn scalar(&self) -> f64 {
        self.ricci().trace()
    }

    /// Orthogonal decomposition `Rm = scal_part + ricci_part + weyl` with
    ///
    /// * `scal_part = Scal / (2 (n-1) n) · g ⊙ g`,
    /// * `ricci_part = 1 / (n-2) · g ⊙ R̊ic` where `R̊ic = Ric - (Scal/n) g`,
    /// * `weyl` the remainder, trace-free and orthogonal to both.
    ///
    /// Requires `n >= 3`; the Weyl part vanishes identically for `n = 3`.
    pub fn decompose(&self) -> Result<DecompositionParts> {
        let n = self.ctx().n();
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "the scalar / traceless-Ricci / Weyl decomposition needs n >= 3, got n = {n}"
            )));
        }
        let nf = n as f64;
        let g = SymmetricBilinear::metric(self.ctx());
        let ricci = self.ricci();
        let scalar = ricci.trace();
        let traceless_ricci = ricci.sub(&g.scaled(scalar / nf))?;
        let scal_part = kulkarni_nomizu(&g, &g)?.scaled(scalar / (2.0 * (nf - 1.0) * nf));
        let ricci_part = kulkarni_nomizu(&g, &traceless_ricci)?.scaled(1.0 / (nf - 2.0));
        let weyl = self.sub(&scal_part)?.sub(&ricci_part)?;
        Ok(DecompositionParts {
            scalar,
            traceless_ricci,
            scal_part,
            ricci_part,
            weyl,
        })
    }

    /// The curvature operator on two-forms: the symmetric `N x N` matrix with
    /// `R[α, β] = Rm(e_i, e_j, e_k, e_l)` over coordinate planes `α = (i, j)`,
    /// `β = (k, l)` in [`SpaceContext::planes`] order.
    pub fn to_operator(&self) -> CurvatureOperator {
        let ctx = self.ctx();
        let planes: Vec<_> = ctx.planes().collect();
        let count = planes.len();
        let mut mat = vec![0.0; count * count];
        for (a, &(i, j)) in planes.iter().enumerate() {
            for (b, &(k, l)) in planes.iter().enumerate().skip(a) {
                // Symmetrize over the pair exchange so the matrix is exactly
                // symmetric even when the input carries a tolerated residual.
                let value = 0.5 * (self.get(i, j, k, l) + self.get(k, l, i, j));
                mat[a * count + b] = value;
                mat[b * count + a] = value;
            }
        }
        CurvatureOperator { ctx, mat }
    }
}

/// Residual of the pair symmetries and the first Bianchi identity, maximized
/// over all index tuples.
fn curvature_residual(tensor: &DenseTensor) -> f64 {
    let n = tensor.ctx().n();
    let t = tensor.components();
    let idx = |x: usize, y: usize, z: usize, w: usize| ((x * n + y) * n + z) * n + w;
    let mut worst = 0.0f64;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let v = t[idx(x, y, z, w)];
                    worst = worst.max((v + t[idx(y, x, z, w)]).abs());
                    worst = worst.max((v + t[idx(x, y, w, z)]).abs());
                    worst = worst.max((v - t[idx(z, w, x, y)]).abs());
                    worst =
                        worst.max((v + t[idx(y, z, x, w)] + t[idx(z, x, y, w)]).abs());
                }
            }
        }
    }
    worst
}

/// Kulkarni–Nomizu product of two symmetric bilinear forms:
///
/// ```text
/// (S ⊙ T)(x, y, z, w) = S(x, z) T(y, w) - S(x, w) T(y, z)
///                     + S(y, w) T(x, z) - S(y, z) T(x, w)
/// ```
///
/// The result is an algebraic curvature tensor (symmetries and Bianchi hold
/// exactly), and the product is symmetric: `S ⊙ T = T ⊙ S`.
pub fn kulkarni_nomizu(s: &SymmetricBilinear, t: &SymmetricBilinear) -> Result<CurvatureTensor> {
    if s.ctx() != t.ctx() {
        return Err(Error::DimensionMismatch(
            "Kulkarni-Nomizu product requires a shared space".into(),
        ));
    }
    let ctx = s.ctx();
    let n = ctx.n();
    let mut out = vec![0.0; n * n * n * n];
    let mut f = 0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    out[f] = s.entry(x, z) * t.entry(y, w) - s.entry(x, w) * t.entry(y, z)
                        + s.entry(y, w) * t.entry(x, z)
                        - s.entry(y, z) * t.entry(x, w);
                    f += 1;
                }
            }
        }
    }
    Ok(CurvatureTensor::from_parts(DenseTensor::from_raw(
        ctx, 4, out,
    )))
}

/// The scalar / traceless-Ricci / Weyl pieces of a curvature tensor.
/// See [`CurvatureTensor::decompose`].
#[derive(Debug, Clone)]
pub struct DecompositionParts {
    /// Scalar curvature `Scal = tr Ric`.
    pub scalar: f64,
    /// `R̊ic = Ric - (Scal / n) g`.
    pub traceless_ricci: SymmetricBilinear,
    /// `Scal / (2 (n-1) n) · g ⊙ g`.
    pub scal_part: CurvatureTensor,
    /// `1 / (n-2) · g ⊙ R̊ic`.
    pub ricci_part: CurvatureTensor,
    /// The Weyl remainder; its Ricci contraction vanishes.
    pub weyl: CurvatureTensor,
}

impl DecompositionParts {
    /// Reassembles `scal_part + ricci_part + weyl`.
    pub fn reconstruct(&self) -> CurvatureTensor {
        self.scal_part
            .add(&self.ricci_part)
            .and_then(|s| s.add(&self.weyl))
            .expect("parts share one context")
    }
}

/// The symmetric curvature operator on two-forms, indexed by coordinate
/// planes in [`SpaceContext::planes`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureOperator {
    ctx: SpaceContext,
    mat: Vec<f64>,
}

impl CurvatureOperator {
    /// Validates an `N x N` row-major matrix (`N = n (n-1) / 2`): finite and
    /// symmetric within `1e-12` per unit of magnitude.
    pub fn new(ctx: SpaceContext, mat: Vec<f64>) -> Result<Self> {
        let count = ctx.plane_count();
        if mat.len() != count * count {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a curvature operator at n = {}, got {}",
                count * count,
                ctx.n(),
                mat.len()
            )));
        }
        if let Some(bad) = mat.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvariantViolation(format!(
                "non-finite operator entry {bad}"
            )));
        }
        let scale: f64 = mat.iter().fold(1.0f64, |m, c| m.max(c.abs()));
        for a in 0..count {
            for b in 0..a {
                let residual = mat[a * count + b] - mat[b * count + a];
                if residual.abs() > EXACT_TOL * scale {
                    return Err(Error::InvariantViolation(format!(
                        "curvature operator is not symmetric: entry ({a}, {b}) residual {residual:e}"
                    )));
                }
            }
        }
        Ok(CurvatureOperator { ctx, mat })
    }

    pub fn identity(ctx: SpaceContext) -> Self {
        let count = ctx.plane_count();
        let mut mat = vec![0.0; count * count];
        for a in 0..count {
            mat[a * count + a] = 1.0;
        }
        CurvatureOperator { ctx, mat }
    }

    pub fn from_diagonal(ctx: SpaceContext, diag: &[f64]) -> Result<Self> {
        let count = ctx.plane_count();
        if diag.len() != count {
            return Err(Error::DimensionMismatch(format!(
                "expected {count} diagonal entries for n = {}, got {}",
                ctx.n(),
                diag.len()
            )));
        }
        let mut mat = vec![0.0; count * count];
        for (a, &d) in diag.iter().enumerate() {
            if !d.is_finite() {
                return Err(Error::InvariantViolation(format!(
                    "non-finite diagonal entry {d}"
                )));
            }
            mat[a * count + a] = d;
        }
        Ok(CurvatureOperator { ctx, mat })
    }

    pub fn ctx(&self) -> SpaceContext {
        self.ctx
    }

    /// Side length `N = n (n-1) / 2`.
    pub fn size(&self) -> usize {
        self.ctx.plane_count()
    }

    pub fn entry(&self, a: usize, b: usize) -> f64 {
        self.mat[a * self.size() + b]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.mat
    }

    /// Reconstructs the curvature tensor whose operator this is: entries are
    /// copied onto plane index pairs, extended by the pair antisymmetries, and
    /// zero whenever `x = y` or `z = w`. Fails if the result violates the
    /// first Bianchi identity, which happens exactly when the matrix carries a
    /// fully antisymmetric (`Λ⁴`) component.
    pub fn to_tensor(&self) -> Result<CurvatureTensor> {
        let n = self.ctx.n();
        let count = self.size();
        let mut out = vec![0.0; n * n * n * n];
        let mut f = 0;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        if x != y && z != w {
                            let (i, j, s1) = if x < y { (x, y, 1.0) } else { (y, x, -1.0) };
                            let (k, l, s2) = if z < w { (z, w, 1.0) } else { (w, z, -1.0) };
                            let a = self.ctx.plane_index(i, j).expect("valid plane");
                            let b = self.ctx.plane_index(k, l).expect("valid plane");
                            out[f] = s1 * s2 * self.mat[a * count + b];
                        }
                        f += 1;
                    }
                }
            }
        }
        CurvatureTensor::new(DenseTensor::from_raw(self.ctx, 4, out))
    }
}

/// The hat lift of a `(0, k)`-tensor: one slice per coordinate plane,
/// `slice_α = L_α T` with `L_α` running over the orthonormal plane basis of
/// `Λ²` and acting as a derivation ([`SkewEndomorphism::act`]).
///
/// For any skew `L`, `⟨L, T̂(X_1, ..., X_k)⟩ = (L T)(X_1, ..., X_k)` — the hat
/// tensor packages every derivation action of `so(n)` on `T` at once.
#[derive(Debug, Clone)]
pub struct HatTensor {
    ctx: SpaceContext,
    arity: usize,
    slices: Vec<DenseTensor>,
}

impl HatTensor {
    pub fn ctx(&self) -> SpaceContext {
        self.ctx
    }

    /// Arity of the underlying tensor (each slice shares it).
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Slices in [`SpaceContext::planes`] order.
    pub fn slices(&self) -> &[DenseTensor] {
        &self.slices
    }

    pub fn slice(&self, alpha: usize) -> &DenseTensor {
        &self.slices[alpha]
    }

    /// `|T̂|² = Σ_α |slice_α|²` (plane basis is orthonormal).
    pub fn norm_sq(&self) -> f64 {
        self.slices.iter().map(|s| s.norm_sq()).sum()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.slices.iter().all(|s| s.max_abs() <= tol)
    }
}

/// Computes the hat lift of a tensor. `O(k n^k)` per plane via the sparse
/// action of plane generators.
pub fn hat(tensor: &DenseTensor) -> HatTensor {
    let ctx = tensor.ctx();
    let slices = ctx.planes().map(|(r, s)| wedge_act(r, s, tensor)).collect();
    HatTensor {
        ctx,
        arity: tensor.arity(),
        slices,
    }
}

/// The Weitzenböck curvature term of a `(0, k)`-tensor:
///
/// ```text
/// Ric(T)(X_1, ..., X_k) = Σ_i Σ_j (R(X_i, e_j) T)(X_1, ..., e_j, ..., X_k)
/// ```
///
/// with `e_j` substituted into slot `i` and curvature acting as a derivation.
/// It is self-adjoint, and `⟨Ric(S), T⟩ = Σ_{α β} R[α, β] ⟨Ŝ_α, T̂_β⟩` ties it
/// to the curvature operator and hat lifts (see [`curvature_quadratic`]).
/// On the constant-curvature model with `κ = 1`, one-forms satisfy
/// `Ric(ω) = (n - 1) ω`.
pub fn weitzenboeck(rm: &CurvatureTensor, tensor: &DenseTensor) -> Result<DenseTensor> {
    if rm.ctx() != tensor.ctx() {
        return Err(Error::DimensionMismatch(
            "Weitzenböck term requires a shared space".into(),
        ));
    }
    let ctx = tensor.ctx();
    let n = ctx.n();
    let k = tensor.arity();
    let comps = tensor.components();
    let r = rm.tensor().components();
    let mut out = vec![0.0; comps.len()];
    if k == 0 {
        return Ok(DenseTensor::from_raw(ctx, 0, out));
    }
    let strides = tensor.strides();
    let mut x = [0usize; MAX_ARITY];
    let ridx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
    for (f, slot) in out.iter_mut().enumerate() {
        crate::tensor::decode_index(f, n, k, &mut x);
        let mut acc = 0.0;
        for i in 0..k {
            let xi = x[i];
            let base_i = f - xi * strides[i];
            for j in 0..n {
                // z = x with slot i replaced by e_j.
                let fz = base_i + j * strides[i];
                for m in 0..k {
                    let zm = if m == i { j } else { x[m] };
                    let base_m = fz - zm * strides[m];
                    let row = ridx(xi, j, zm, 0);
                    for w in 0..n {
                        // -(R(x_i, e_j) acting in slot m)
                        acc -= r[row + w] * comps[base_m + w * strides[m]];
                    }
                }
            }
        }
        *slot = acc;
    }
    Ok(DenseTensor::from_raw(ctx, k, out))
}

/// The curvature quadratic form on hat lifts:
/// `g(ℜ(T̂), T̂) = Σ_{α β} R[α, β] ⟨T̂_α, T̂_β⟩`.
///
/// For a curvature operator coming from `Rm` this equals `⟨Ric(T), T⟩` with
/// `Ric` the Weitzenböck term of `Rm` — the two are computed along entirely
/// different routes, which the test suites exploit.
pub fn curvature_quadratic(op: &CurvatureOperator, tensor: &DenseTensor) -> Result<f64> {
    if op.ctx() != tensor.ctx() {
        return Err(Error::DimensionMismatch(
            "curvature quadratic form requires a shared space".into(),
        ));
    }
    let lift = hat(tensor);
    let count = op.size();
    let mut acc = 0.0;
    for a in 0..count {
        let sa = lift.slice(a);
        acc += op.entry(a, a) * sa.norm_sq();
        for b in a + 1..count {
            acc += 2.0 * op.entry(a, b) * sa.inner(lift.slice(b))?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::tensor::SkewEndomorphism;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(n: usize) -> SpaceContext {
        SpaceContext::new(n).unwrap()
    }

    fn basis_covector(ctx: SpaceContext, i: usize) -> DenseTensor {
        let mut t = DenseTensor::zeros(ctx, 1).unwrap();
        t.set(&[i], 1.0);
        t
    }

    /// Brute-force Kulkarni–Nomizu expansion, independent of the production
    /// routine: oracle for the inner-product value below.
    fn kn_entry(
        s: &SymmetricBilinear,
        t: &SymmetricBilinear,
        x: usize,
        y: usize,
        z: usize,
        w: usize,
    ) -> f64 {
        s.entry(x, z) * t.entry(y, w) - s.entry(x, w) * t.entry(y, z)
            + s.entry(y, w) * t.entry(x, z)
            - s.entry(y, z) * t.entry(x, w)
    }

    #[test]
    fn metric_kn_square_entries() {
        let g = SymmetricBilinear::metric(ctx(3));
        let gg = kulkarni_nomizu(&g, &g).unwrap();
        assert_eq!(gg.get(0, 1, 0, 1), 2.0);
        assert_eq!(gg.get(0, 1, 1, 0), -2.0);
        assert_eq!(gg.get(0, 0, 1, 1), 0.0);
        assert_eq!(gg.get(0, 1, 0, 2), 0.0);
    }

    #[test]
    fn metric_kn_square_norm_in_dimension_three() {
        // Oracle: brute-force sum over all 3^4 index tuples.
        let c = ctx(3);
        let g = SymmetricBilinear::metric(c);
        let mut oracle = 0.0;
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    for w in 0..3 {
                        oracle += kn_entry(&g, &g, x, y, z, w).powi(2);
                    }
                }
            }
        }
        assert_eq!(oracle, 48.0);
        let gg = kulkarni_nomizu(&g, &g).unwrap();
        assert_eq!(gg.inner(&gg).unwrap(), 48.0);
    }

    #[test]
    fn kn_product_is_symmetric_in_its_arguments() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let c = ctx(4);
        let s = random::random_symmetric_bilinear(c, &mut rng);
        let t = random::random_symmetric_bilinear(c, &mut rng);
        let st = kulkarni_nomizu(&s, &t).unwrap();
        let ts = kulkarni_nomizu(&t, &s).unwrap();
        assert!(st.sub(&ts).unwrap().tensor().max_abs() <= 1e-14);
    }

    #[test]
    fn kn_product_passes_full_validation() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for n in 3..=6 {
            let c = ctx(n);
            let s = random::random_symmetric_bilinear(c, &mut rng);
            let t = random::random_symmetric_bilinear(c, &mut rng);
            let kn = kulkarni_nomizu(&s, &t).unwrap();
            CurvatureTensor::new(kn.tensor().clone()).unwrap();
        }
    }

    #[test]
    fn constructor_rejects_symmetry_violations() {
        let c = ctx(3);
        let mut t = DenseTensor::zeros(c, 4).unwrap();
        t.set(&[0, 1, 0, 1], 1.0);
        // Missing all the symmetry partners.
        assert!(CurvatureTensor::new(t).is_err());
    }

    #[test]
    fn projection_repairs_noisy_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let c = ctx(4);
        let raw = random::random_tensor(c, 4, &mut rng).unwrap();
        let rm = CurvatureTensor::project(&raw).unwrap();
        // Projection is idempotent.
        let again = CurvatureTensor::project(rm.tensor()).unwrap();
        assert!(rm.sub(&again).unwrap().tensor().max_abs() <= 1e-12);
    }

    #[test]
    fn ricci_of_constant_curvature_model() {
        for n in 3..=6 {
            let c = ctx(n);
            let rm = CurvatureTensor::constant_curvature(c, 1.0);
            let ric = rm.ricci();
            // Oracle: direct contraction of (1/2) g ⊙ g.
            let g = SymmetricBilinear::metric(c);
            for x in 0..n {
                for y in 0..n {
                    let mut oracle = 0.0;
                    for j in 0..n {
                        oracle += 0.5 * kn_entry(&g, &g, x, j, y, j);
                    }
                    assert_eq!(ric.entry(x, y), oracle);
                    let expected = if x == y { (n - 1) as f64 } else { 0.0 };
                    assert_eq!(ric.entry(x, y), expected);
                }
            }
            assert_eq!(rm.scalar(), (n * (n - 1)) as f64);
        }
    }

    #[test]
    fn ricci_of_zero_is_zero() {
        let rm = CurvatureTensor::zeros(ctx(4));
        assert_eq!(rm.ricci().max_abs(), 0.0);
        assert_eq!(rm.scalar(), 0.0);
    }

    #[test]
    fn decompose_constant_curvature_is_pure_scalar_part() {
        for kappa in [-2.0, 1.0, 3.5] {
            let c = ctx(5);
            let rm = CurvatureTensor::constant_curvature(c, kappa);
            let parts = rm.decompose().unwrap();
            assert!((parts.scalar - 5.0 * 4.0 * kappa).abs() <= 1e-12 * kappa.abs().max(1.0));
            assert!(parts.traceless_ricci.max_abs() <= 1e-12);
            assert!(parts.ricci_part.tensor().max_abs() <= 1e-12);
            assert!(parts.weyl.tensor().max_abs() <= 1e-12);
            assert!(
                parts
                    .scal_part
                    .sub(&rm)
                    .unwrap()
                    .tensor()
                    .max_abs()
                    <= 1e-12 * kappa.abs().max(1.0)
            );
        }
    }

    #[test]
    fn decompose_requires_dimension_three() {
        let rm = CurvatureTensor::constant_curvature(ctx(2), 1.0);
        assert!(rm.decompose().is_err());
    }

    #[test]
    fn decompose_reconstructs_and_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for n in [3, 4, 5] {
            let c = ctx(n);
            let rm = random::random_curvature_tensor(c, &mut rng).unwrap();
            let parts = rm.decompose().unwrap();
            let scale = rm.norm().max(1.0);
            let diff = parts.reconstruct().sub(&rm).unwrap();
            assert!(diff.tensor().max_abs() <= 1e-9 * scale);
            for (a, b) in [
                (&parts.scal_part, &parts.ricci_part),
                (&parts.scal_part, &parts.weyl),
                (&parts.ricci_part, &parts.weyl),
            ] {
                let ip = a.inner(b).unwrap();
                assert!(ip.abs() <= 1e-9 * scale * scale, "inner product {ip}");
            }
            // The Weyl part is totally trace-free.
            assert!(parts.weyl.ricci().max_abs() <= 1e-9 * scale);
            if n == 3 {
                assert!(parts.weyl.tensor().max_abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn operator_of_constant_curvature_is_kappa_identity() {
        for n in [3, 5] {
            let c = ctx(n);
            let rm = CurvatureTensor::constant_curvature(c, 2.5);
            let op = rm.to_operator();
            let count = c.plane_count();
            for a in 0..count {
                for b in 0..count {
                    let expected = if a == b { 2.5 } else { 0.0 };
                    assert_eq!(op.entry(a, b), expected);
                }
            }
        }
    }

    #[test]
    fn operator_round_trips_through_tensor() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for n in [3, 4, 5] {
            let c = ctx(n);
            let rm = random::random_curvature_tensor(c, &mut rng).unwrap();
            let back = rm.to_operator().to_tensor().unwrap();
            let scale = rm.norm().max(1.0);
            assert!(back.sub(&rm).unwrap().tensor().max_abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn operator_to_tensor_rejects_bianchi_violations() {
        // A matrix supported on ⟨(e0∧e1), (e2∧e3)⟩ alone carries a Λ⁴
        // component and is not the operator of any curvature tensor.
        let c = ctx(4);
        let count = c.plane_count();
        let mut mat = vec![0.0; count * count];
        let a = c.plane_index(0, 1).unwrap();
        let b = c.plane_index(2, 3).unwrap();
        mat[a * count + b] = 1.0;
        mat[b * count + a] = 1.0;
        let op = CurvatureOperator::new(c, mat).unwrap();
        assert!(op.to_tensor().is_err());
    }

    #[test]
    fn operator_constructor_validates() {
        let c = ctx(3);
        assert!(CurvatureOperator::new(c, vec![0.0; 8]).is_err());
        let mut asym = vec![0.0; 9];
        asym[1] = 1.0;
        assert!(CurvatureOperator::new(c, asym).is_err());
        assert!(CurvatureOperator::new(c, vec![f64::INFINITY; 9]).is_err());
    }

    #[test]
    fn hat_of_basis_covector() {
        // |ê^0|² = 1 · (n - 1) · |e^0|² = 2 in dimension 3.
        let c = ctx(3);
        let lift = hat(&basis_covector(c, 0));
        assert_eq!(lift.norm_sq(), 2.0);
        // Slices match the dense derivation action.
        for (alpha, (r, s)) in c.planes().enumerate() {
            let dense = SkewEndomorphism::wedge(c, r, s)
                .unwrap()
                .act(&basis_covector(c, 0))
                .unwrap();
            assert_eq!(lift.slice(alpha).components(), dense.components());
        }
    }

    #[test]
    fn hat_annihilates_the_constant_curvature_model() {
        for n in 3..=5 {
            let c = ctx(n);
            let rm = CurvatureTensor::constant_curvature(c, 1.7);
            let lift = hat(rm.tensor());
            assert!(lift.is_zero(1e-12));
        }
    }

    #[test]
    fn hat_sees_only_the_non_scalar_parts() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let c = ctx(5);
        let rm = random::random_curvature_tensor(c, &mut rng).unwrap();
        let parts = rm.decompose().unwrap();
        let traceless = rm.sub(&parts.scal_part).unwrap();
        let full = hat(rm.tensor());
        let reduced = hat(traceless.tensor());
        for (a, b) in full.slices().iter().zip(reduced.slices()) {
            assert!(a.sub(b).unwrap().max_abs() <= 1e-12 * rm.norm().max(1.0));
        }
    }

    #[test]
    fn weitzenboeck_on_round_model_scales_one_forms() {
        // Rm = ½ g ⊙ g, ω = e^0, n = 3: Ric(ω) = (n - 1) ω = 2 e^0.
        let c = ctx(3);
        let rm = CurvatureTensor::constant_curvature(c, 1.0);
        let w = weitzenboeck(&rm, &basis_covector(c, 0)).unwrap();
        assert_eq!(w.components(), &[2.0, 0.0, 0.0]);
    }

    #[test]
    fn weitzenboeck_of_zero_curvature_vanishes() {
        let c = ctx(4);
        let rm = CurvatureTensor::zeros(c);
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let t = random::random_tensor(c, 3, &mut rng).unwrap();
        assert_eq!(weitzenboeck(&rm, &t).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn weitzenboeck_is_self_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(28);
        let c = ctx(4);
        let rm = random::random_curvature_tensor(c, &mut rng).unwrap();
        for k in 1..=3 {
            let s = random::random_tensor(c, k, &mut rng).unwrap();
            let t = random::random_tensor(c, k, &mut rng).unwrap();
            let lhs = weitzenboeck(&rm, &s).unwrap().inner(&t).unwrap();
            let rhs = s.inner(&weitzenboeck(&rm, &t).unwrap()).unwrap();
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            assert!((lhs - rhs).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn weitzenboeck_pairing_matches_operator_quadratic_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for n in [3, 4] {
            let c = ctx(n);
            let rm = random::random_curvature_tensor(c, &mut rng).unwrap();
            let op = rm.to_operator();
            for k in 1..=3 {
                let s = random::random_tensor(c, k, &mut rng).unwrap();
                let t = random::random_tensor(c, k, &mut rng).unwrap();
                let lhs = weitzenboeck(&rm, &s).unwrap().inner(&t).unwrap();
                // Σ R[α, β] ⟨Ŝ_α, T̂_β⟩ computed without the symmetry shortcut.
                let hs = hat(&s);
                let ht = hat(&t);
                let mut rhs = 0.0;
                for a in 0..op.size() {
                    for b in 0..op.size() {
                        rhs += op.entry(a, b) * hs.slice(a).inner(ht.slice(b)).unwrap();
                    }
                }
                let scale = lhs.abs().max(rhs.abs()).max(1.0);
                assert!(
                    (lhs - rhs).abs() <= 1e-9 * scale,
                    "n = {n}, k = {k}: {lhs} vs {rhs}"
                );
                // And the packaged quadratic form agrees on s = t.
                let quad = curvature_quadratic(&op, &s).unwrap();
                let direct = weitzenboeck(&rm, &s).unwrap().inner(&s).unwrap();
                let scale = quad.abs().max(direct.abs()).max(1.0);
                assert!((quad - direct).abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn quadratic_form_of_identity_operator_is_hat_norm() {
        let c = ctx(3);
        let op = CurvatureOperator::identity(c);
        let w = basis_covector(c, 0);
        assert_eq!(curvature_quadratic(&op, &w).unwrap(), 2.0);
        let zero = DenseTensor::zeros(c, 2).unwrap();
        assert_eq!(curvature_quadratic(&op, &zero).unwrap(), 0.0);
    }
}
