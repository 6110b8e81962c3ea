//! Operator spectra and partial-trace positivity.
//!
//! The key quantity everywhere is the *prefix sum* `μ_1 + ... + μ_m` of the
//! ascending eigenvalues of a curvature operator: positivity of such a sum
//! ("m-positivity") is the curvature condition the vanishing criteria in
//! [`crate::decisions`] consume, and `prefix / m` is the best constant `κ`
//! with `g(ℜ(T̂), T̂) >= κ |T̂|²` obtainable from the eigenvalue floor
//! ([`lemma22_check`]).

use serde::{Deserialize, Serialize};

use crate::curvature::{curvature_quadratic, hat, CurvatureOperator};
use crate::eigen::symmetric_eigen;
use crate::random;
use crate::space::SpaceContext;
use crate::tensor::DenseTensor;
use crate::{Error, Result};

/// Relative tolerance separating "positive" from "zero within noise" in
/// classifications and verdicts.
pub const CLASSIFY_EPS: f64 = 1e-9;

/// Seed for the randomized half of the [`lemma22_check`] precondition sample.
/// Fixed so the check is a deterministic function of its arguments.
const BOUND_SAMPLE_SEED: u64 = 0x0b0c_4e21;

/// Sign classification of a partial eigenvalue trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// The prefix sum clears `+ε · scale`.
    Positive,
    /// The prefix sum sits within `ε · scale` of zero.
    NonnegativeNotPositive,
    /// The prefix sum is below `-ε · scale`.
    Indefinite,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::Positive => "positive",
            Classification::NonnegativeNotPositive => "nonnegative_not_positive",
            Classification::Indefinite => "indefinite",
        };
        f.write_str(s)
    }
}

/// Ascending spectrum of a curvature operator with its prefix sums.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    #[serde(skip)]
    ctx: SpaceContext,
    /// Eigenvalues in ascending order, `N = n (n - 1) / 2` of them.
    eigenvalues: Vec<f64>,
    /// `prefix_sums[m] = μ_1 + ... + μ_m`, with `prefix_sums[0] = 0`; each
    /// step adds exactly one eigenvalue.
    prefix_sums: Vec<f64>,
    /// `max(1, |μ_1|, |μ_N|)` — the magnitude against which `ε` is scaled.
    scale: f64,
}

impl SpectralReport {
    /// Solves the operator's eigenproblem (dense Jacobi iteration; residuals
    /// `|R v - μ v|` stay below `1e-9 · scale`).
    pub fn from_operator(op: &CurvatureOperator) -> Self {
        let (eigenvalues, _) = symmetric_eigen(op.size(), op.matrix());
        Self::from_sorted_eigenvalues(op.ctx(), eigenvalues)
    }

    /// Builds a report from externally supplied eigenvalues (they are sorted
    /// here; the count must equal the plane count of `ctx`).
    pub fn from_eigenvalues(ctx: SpaceContext, mut eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.len() != ctx.plane_count() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} eigenvalues at n = {}, got {}",
                ctx.plane_count(),
                ctx.n(),
                eigenvalues.len()
            )));
        }
        if let Some(bad) = eigenvalues.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvariantViolation(format!(
                "non-finite eigenvalue {bad}"
            )));
        }
        eigenvalues.sort_by(f64::total_cmp);
        Ok(Self::from_sorted_eigenvalues(ctx, eigenvalues))
    }

    fn from_sorted_eigenvalues(ctx: SpaceContext, eigenvalues: Vec<f64>) -> Self {
        let mut prefix_sums = Vec::with_capacity(eigenvalues.len() + 1);
        prefix_sums.push(0.0);
        let mut acc = 0.0;
        for &v in &eigenvalues {
            acc += v;
            prefix_sums.push(acc);
        }
        let scale = eigenvalues
            .iter()
            .fold(1.0f64, |m, v| m.max(v.abs()));
        SpectralReport {
            ctx,
            eigenvalues,
            prefix_sums,
            scale,
        }
    }

    pub fn ctx(&self) -> SpaceContext {
        self.ctx
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn check_m(&self, m: usize) -> Result<()> {
        if m == 0 || m > self.eigenvalues.len() {
            return Err(Error::InvalidArgument(format!(
                "partial trace order m = {m} must lie in 1..={}",
                self.eigenvalues.len()
            )));
        }
        Ok(())
    }

    /// `μ_1 + ... + μ_m` for `1 <= m <= N`.
    pub fn prefix_sum(&self, m: usize) -> Result<f64> {
        self.check_m(m)?;
        Ok(self.prefix_sums[m])
    }

    /// Classifies the sign of `μ_1 + ... + μ_m` against `ε = 1e-9 · scale`.
    ///
    /// Monotone in `m`: once positive, larger prefixes stay positive.
    pub fn classify_m(&self, m: usize) -> Result<Classification> {
        let sum = self.prefix_sum(m)?;
        let eps = CLASSIFY_EPS * self.scale;
        Ok(if sum > eps {
            Classification::Positive
        } else if sum >= -eps {
            Classification::NonnegativeNotPositive
        } else {
            Classification::Indefinite
        })
    }

    /// The eigenvalue-floor constant `(μ_1 + ... + μ_m) / m`.
    pub fn kappa_lower_bound(&self, m: usize) -> Result<f64> {
        Ok(self.prefix_sum(m)? / m as f64)
    }
}

/// Boolean witness for the eigenvalue-floor estimate: given an operator `R`,
/// a tensor `T`, and a constant `C >= 1` such that
///
/// ```text
/// |L T|² <= (1/C) |T̂|² |L|²   for every skew L,
/// ```
///
/// the quadratic form obeys `g(ℜ(T̂), T̂) >= κ |T̂|²` whenever `κ` is at most
/// the mean of the lowest `⌊C⌋` eigenvalues. This function checks the bound
/// hypothesis on a deterministic sample (every plane generator plus 100
/// seeded random skews) and then evaluates the conclusion with slack
/// `-1e-9 · scale · |T̂|²`.
///
/// It is a sampled witness for property testing, not a proof of either side.
pub fn lemma22_check(
    op: &CurvatureOperator,
    tensor: &DenseTensor,
    c_bound: f64,
    kappa: f64,
) -> Result<bool> {
    if op.ctx() != tensor.ctx() {
        return Err(Error::DimensionMismatch(
            "eigenvalue-floor check requires a shared space".into(),
        ));
    }
    if !(c_bound >= 1.0) || !c_bound.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "bound constant C = {c_bound} must be finite and >= 1"
        )));
    }
    if !kappa.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "kappa = {kappa} must be finite"
        )));
    }
    let ctx = tensor.ctx();
    let lift = hat(tensor);
    let hat_norm_sq = lift.norm_sq();

    // Hypothesis sample: plane generators (unit norm) first...
    let budget = hat_norm_sq / c_bound;
    let slack = 1e-12 * budget.max(1.0);
    for (alpha, slice) in lift.slices().iter().enumerate() {
        let lhs = slice.norm_sq();
        if lhs > budget + slack {
            let (i, j) = ctx.plane_at(alpha);
            return Err(Error::HypothesisViolation(format!(
                "|L T|² = {lhs:e} exceeds |T̂|²/C = {budget:e} for the plane generator ({i}, {j})"
            )));
        }
    }
    // ... then seeded random skew directions.
    let mut rng = random::rng_from_seed(BOUND_SAMPLE_SEED);
    for _ in 0..100 {
        let l = random::random_skew(ctx, &mut rng);
        let lhs = l.act(tensor)?.norm_sq();
        let rhs = budget * l.norm_sq();
        if lhs > rhs + 1e-12 * rhs.max(1.0) {
            return Err(Error::HypothesisViolation(format!(
                "|L T|² = {lhs:e} exceeds (1/C) |T̂|² |L|² = {rhs:e} on a sampled skew direction"
            )));
        }
    }

    let report = SpectralReport::from_operator(op);
    let quad = curvature_quadratic(op, tensor)?;
    Ok(quad >= kappa * hat_norm_sq - CLASSIFY_EPS * report.scale() * hat_norm_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::CurvatureTensor;
    use crate::eigen::symmetric_eigen;
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

    #[test]
    fn spectrum_of_identity_operator() {
        let report = SpectralReport::from_operator(&CurvatureOperator::identity(ctx(3)));
        assert_eq!(report.eigenvalues(), &[1.0, 1.0, 1.0]);
        assert_eq!(report.prefix_sum(3).unwrap(), 3.0);
    }

    #[test]
    fn spectrum_of_round_model() {
        let rm = CurvatureTensor::constant_curvature(ctx(4), 1.0);
        let report = SpectralReport::from_operator(&rm.to_operator());
        assert_eq!(report.eigenvalues(), &[1.0; 6]);
    }

    #[test]
    fn spectrum_of_diagonal_operator() {
        let op = CurvatureOperator::from_diagonal(ctx(3), &[6.0, 2.0, 3.0]).unwrap();
        let report = SpectralReport::from_operator(&op);
        assert_eq!(report.eigenvalues(), &[2.0, 3.0, 6.0]);
        assert_eq!(report.kappa_lower_bound(2).unwrap(), 2.5);
    }

    #[test]
    fn prefix_sums_step_by_exactly_one_eigenvalue() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in 3..=6 {
            let op = crate::random::random_operator(ctx(n), &mut rng);
            let report = SpectralReport::from_operator(&op);
            for m in 1..=report.eigenvalues().len() {
                // Each entry is the previous one plus exactly one eigenvalue
                // (bit-identical, not merely close).
                assert_eq!(
                    report.prefix_sums[m],
                    report.prefix_sums[m - 1] + report.eigenvalues()[m - 1]
                );
            }
        }
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for n in 3..=8 {
            let op = crate::random::random_operator(ctx(n), &mut rng);
            let report = SpectralReport::from_operator(&op);
            let count = op.size();
            let trace: f64 = (0..count).map(|a| op.entry(a, a)).sum();
            let sum = report.prefix_sum(count).unwrap();
            assert!((trace - sum).abs() <= 1e-9 * report.scale() * count as f64);
        }
    }

    #[test]
    fn eigen_residuals_meet_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let op = crate::random::random_operator(ctx(6), &mut rng);
        let count = op.size();
        let (values, vectors) = symmetric_eigen(count, op.matrix());
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for k in 0..count {
            for r in 0..count {
                let mut av = 0.0;
                for c in 0..count {
                    av += op.matrix()[r * count + c] * vectors[k][c];
                }
                assert!((av - values[k] * vectors[k][r]).abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn classification_thresholds() {
        let c = ctx(3);
        let pos = SpectralReport::from_operator(&CurvatureOperator::identity(c));
        assert_eq!(pos.classify_m(1).unwrap(), Classification::Positive);

        let mixed =
            SpectralReport::from_operator(&CurvatureOperator::from_diagonal(c, &[-1.0, 5.0, 5.0]).unwrap());
        assert_eq!(mixed.classify_m(1).unwrap(), Classification::Indefinite);
        assert_eq!(mixed.classify_m(2).unwrap(), Classification::Positive);

        let boundary =
            SpectralReport::from_operator(&CurvatureOperator::from_diagonal(c, &[-2.0, 2.0, 7.0]).unwrap());
        assert_eq!(
            boundary.classify_m(2).unwrap(),
            Classification::NonnegativeNotPositive
        );
    }

    #[test]
    fn classification_is_monotone_in_m() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for n in 3..=6 {
            for _ in 0..50 {
                let op = crate::random::random_operator(ctx(n), &mut rng);
                let report = SpectralReport::from_operator(&op);
                let mut seen_positive = false;
                for m in 1..=report.eigenvalues().len() {
                    let class = report.classify_m(m).unwrap();
                    if seen_positive {
                        assert_eq!(class, Classification::Positive);
                    }
                    seen_positive = class == Classification::Positive;
                }
            }
        }
    }

    #[test]
    fn partial_trace_order_is_validated() {
        let report = SpectralReport::from_operator(&CurvatureOperator::identity(ctx(3)));
        assert!(report.prefix_sum(0).is_err());
        assert!(report.prefix_sum(4).is_err());
        assert!(report.classify_m(0).is_err());
        assert!(report.kappa_lower_bound(4).is_err());
    }

    #[test]
    fn from_eigenvalues_sorts_and_validates() {
        let c = ctx(3);
        let report = SpectralReport::from_eigenvalues(c, vec![3.0, -1.0, 2.0]).unwrap();
        assert_eq!(report.eigenvalues(), &[-1.0, 2.0, 3.0]);
        assert!(SpectralReport::from_eigenvalues(c, vec![1.0]).is_err());
        assert!(SpectralReport::from_eigenvalues(c, vec![1.0, f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn eigenvalue_floor_witness_on_the_identity() {
        // One-forms meet the bound with C = n - 1, and the identity operator
        // delivers exactly κ = 1 (boundary case: the slack keeps it true).
        let c = ctx(3);
        let op = CurvatureOperator::identity(c);
        let w = basis_covector(c, 0);
        assert!(lemma22_check(&op, &w, 2.0, 1.0).unwrap());
        assert!(!lemma22_check(&op, &w, 2.0, 1.1).unwrap());
    }

    #[test]
    fn eigenvalue_floor_witness_with_mixed_spectrum() {
        let c = ctx(3);
        let op = CurvatureOperator::from_diagonal(c, &[-1.0, 5.0, 5.0]).unwrap();
        let report = SpectralReport::from_operator(&op);
        let kappa = report.kappa_lower_bound(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..20 {
            let w = crate::random::random_form(c, 1, &mut rng).unwrap();
            assert!(lemma22_check(&op, w.tensor(), 2.0, kappa).unwrap());
        }
    }

    #[test]
    fn eigenvalue_floor_witness_rejects_bad_arguments() {
        let c = ctx(3);
        let op = CurvatureOperator::identity(c);
        let w = basis_covector(c, 0);
        assert!(matches!(
            lemma22_check(&op, &w, 0.5, 0.0),
            Err(Error::InvalidArgument(_))
        ));
        // C too large: the bound hypothesis fails on plane generators.
        assert!(matches!(
            lemma22_check(&op, &w, 100.0, 0.0),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn zero_tensor_passes_the_witness_trivially() {
        let c = ctx(4);
        let op = CurvatureOperator::identity(c);
        let zero = DenseTensor::zeros(c, 2).unwrap();
        assert!(lemma22_check(&op, &zero, 2.0, 5.0).unwrap());
    }
}
