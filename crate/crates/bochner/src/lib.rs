//! Numerical toolkit for algebraic curvature operators on Euclidean vector
//! spaces and the Bochner-technique estimates built on them.
//!
//! The pipeline, bottom to top:
//!
//! * [`space`] — the ambient `ℝⁿ` (`2 <= n <= 8`, identity metric) and its
//!   lexicographic basis of coordinate planes `e_i ∧ e_j`.
//! * [`tensor`] — dense covariant tensors up to arity 4, alternating forms,
//!   and skew endomorphisms acting as derivations.
//! * [`curvature`] — algebraic curvature tensors (pair symmetries plus the
//!   cyclic identity), Kulkarni–Nomizu products, the orthogonal
//!   scalar/traceless-Ricci/Weyl decomposition, curvature operators on
//!   `Λ²ℝⁿ`, the hat lift `T ↦ T̂ = (L_α T)_α`, and the Weitzenböck
//!   curvature term `Ric(T)`.
//! * [`eigen`] — a dense symmetric eigensolver (cyclic Jacobi).
//! * [`spectral`] — ascending spectra, prefix sums, m-positivity
//!   classification, and the eigenvalue-floor estimate.
//! * [`decisions`] — thresholds and auditable verdicts for vanishing and
//!   rigidity criteria (harmonic tensors, forms, Weyl tensors, hypersurfaces,
//!   totally umbilical submanifolds).
//! * [`verify`] — named randomized suites that re-check the core identities
//!   through independent evaluation routes.
//! * [`random`] — seeded generators for all of the above.
//!
//! Conventions (fixed throughout): the metric is the identity; tensors are
//! stored dense in row-major order with the last index fastest; the plane
//! basis `{e_i ∧ e_j}_{i<j}` is orthonormal, so the inner product on skew
//! endomorphisms is half the Frobenius pairing; `e_i ∧ e_j` maps `e_i ↦ e_j`;
//! curvature tensors relate to operators by `g(R(X, Y) Z, W) = Rm(X, Y, Z, W)`;
//! skew endomorphisms act on covariant tensors by
//! `(L T)(X_1, ..., X_k) = -Σ_m T(X_1, ..., L X_m, ..., X_k)`. With these
//! choices the Weitzenböck term of a 1-form on the curvature-1 model is
//! `Ric(ω) = (n - 1) ω`.

pub mod curvature;
pub mod decisions;
pub mod eigen;
mod error;
pub mod random;
pub mod space;
pub mod spectral;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};

pub use curvature::{
    curvature_quadratic, hat, kulkarni_nomizu, weitzenboeck, CurvatureOperator, CurvatureTensor,
    DecompositionParts, HatTensor, SymmetricBilinear,
};
pub use decisions::{
    betti_verdict, form_threshold, form_vanishing_verdict, harmonic_tensor_verdict,
    kappa_threshold, umbilic_verdict, weighted_tensor_verdict, weyl_threshold, weyl_verdict,
    AnalyticHypotheses, Conclusion, ConstantWeight, HypersurfaceSpec, HypothesisCheck,
    KatoConstant, TheoremVerdict, UmbilicSpec, WeylVariant,
};
pub use space::{SpaceContext, MAX_DIMENSION, MIN_DIMENSION};
pub use spectral::{lemma22_check, Classification, SpectralReport};
pub use tensor::{AlternatingForm, DenseTensor, SkewEndomorphism};
pub use verify::{parse_suites, run_all, run_suite, run_suite_in, Suite, SuiteOutcome};
