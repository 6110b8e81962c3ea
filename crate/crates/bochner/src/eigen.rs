//! Dense symmetric eigensolver.
//!
//! Curvature operators here are at most `28 x 28` (`n = 8` planes), so a
//! classic cyclic Jacobi iteration is plenty: it is simple to audit, needs no
//! dependencies, and converges to machine precision in a handful of sweeps on
//! matrices this small.

const MAX_SWEEPS: usize = 64;

/// Full spectrum of a dense symmetric `n x n` matrix (row-major).
///
/// Returns eigenvalues in ascending order together with matching orthonormal
/// eigenvectors (`vectors[k]` pairs with `values[k]`). Ties keep the internal
/// diagonal order, so the output is deterministic for identical input.
///
/// # Panics
/// Panics if `mat.len() != n * n` or any entry is non-finite. Symmetry is the
/// caller's responsibility; only the lower triangle drives the rotations.
pub fn symmetric_eigen(n: usize, mat: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    assert_eq!(mat.len(), n * n, "matrix storage must be n x n");
    assert!(
        mat.iter().all(|x| x.is_finite()),
        "eigensolver requires finite entries"
    );
    let mut a = mat.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let frob_sq: f64 = mat.iter().map(|x| x * x).sum();
    // Stop once the off-diagonal mass is negligible relative to the matrix.
    let stop = (frob_sq * 1e-30).max(f64::MIN_POSITIVE);

    for sweep in 0..MAX_SWEEPS {
        let mut off_sq = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off_sq += a[p * n + q] * a[p * n + q];
            }
        }
        if off_sq <= stop {
            break;
        }
        // Skip tiny pivots during early sweeps; afterwards rotate everything.
        let threshold = if sweep < 3 {
            0.2 * off_sq / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 || apq * apq <= threshold {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] -= t * apq;
                a[q * n + q] += t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = vrp - s * (vrq + tau * vrp);
                    v[r * n + q] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    let values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| values[x].total_cmp(&values[y]));
    let sorted_values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| (0..n).map(|r| v[r * n + i]).collect())
        .collect();
    (sorted_values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn residual(n: usize, mat: &[f64], value: f64, vector: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..n {
            let mut av = 0.0;
            for c in 0..n {
                av += mat[r * n + c] * vector[c];
            }
            worst = worst.max((av - value * vector[r]).abs());
        }
        worst
    }

    #[test]
    fn diagonal_matrix_is_already_solved() {
        let mat = vec![3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0];
        let (values, _) = symmetric_eigen(3, &mat);
        assert_eq!(values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_known_spectrum() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3.
        let (values, vectors) = symmetric_eigen(2, &[2.0, 1.0, 1.0, 2.0]);
        assert!((values[0] - 1.0).abs() < 1e-14);
        assert!((values[1] - 3.0).abs() < 1e-14);
        for k in 0..2 {
            assert!(residual(2, &[2.0, 1.0, 1.0, 2.0], values[k], &vectors[k]) < 1e-14);
        }
    }

    #[test]
    fn random_matrices_have_small_residuals_and_exact_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=28 {
            let mut mat = vec![0.0; n * n];
            for r in 0..n {
                for c in 0..=r {
                    let x = rng.gen_range(-1.0..=1.0);
                    mat[r * n + c] = x;
                    mat[c * n + r] = x;
                }
            }
            let (values, vectors) = symmetric_eigen(n, &mat);
            let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for k in 0..n {
                assert!(
                    residual(n, &mat, values[k], &vectors[k]) <= 1e-9 * scale,
                    "residual too large at n = {n}, k = {k}"
                );
                let norm: f64 = vectors[k].iter().map(|x| x * x).sum();
                assert!((norm - 1.0).abs() < 1e-10);
            }
            let trace: f64 = (0..n).map(|i| mat[i * n + i]).sum();
            let sum: f64 = values.iter().sum();
            assert!((trace - sum).abs() <= 1e-10 * scale * n as f64);
            for w in values.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn repeated_eigenvalues_are_handled() {
        // The 4x4 matrix with all entries 1 has spectrum {0, 0, 0, 4}.
        let mat = vec![1.0; 16];
        let (values, _) = symmetric_eigen(4, &mat);
        assert!(values[0].abs() < 1e-12);
        assert!(values[1].abs() < 1e-12);
        assert!(values[2].abs() < 1e-12);
        assert!((values[3] - 4.0).abs() < 1e-12);
    }
}
