//! Input and report document schemas (TOML) and the analysis pipeline that
//! turns one into the other.
//!
//! Schema notes (`format_version = 1`):
//!
//! * Flat component lists are row-major with the last index fastest; index
//!   semantics in this documentation are 1-based (`Rm(e_1, e_2, e_1, e_2)` is
//!   the first off-diagonal sectional entry), storage is 0-based.
//! * Exactly one curvature object must be present: either `curvature_tensor`
//!   (n⁴ components) or one `constructor` variant.
//! * Reports echo the parsed input under `[input]`; re-ingesting that echo
//!   reproduces the analysis.

use anyhow::{anyhow, bail, Context};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use bochner::curvature::{hat, kulkarni_nomizu, weitzenboeck, CurvatureOperator, CurvatureTensor, SymmetricBilinear};
use bochner::decisions::{
    betti_verdict, form_vanishing_verdict, harmonic_tensor_verdict, weighted_tensor_verdict,
    weyl_verdict, AnalyticHypotheses, HypersurfaceSpec, KatoConstant, TheoremVerdict, WeylVariant,
};
use bochner::random;
use bochner::spectral::SpectralReport;
use bochner::space::SpaceContext;
use bochner::tensor::{AlternatingForm, DenseTensor};

pub const FORMAT_VERSION: u32 = 1;

/// Relative tolerance for the report's identity checks.
const IDENTITY_TOL: f64 = 1e-9;

/// A curvature analysis request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub format_version: u32,
    pub dimension: usize,
    /// Seed for the randomized probes in the identity checks (default 0).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub object: ObjectSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<FormSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisRequest>,
}

/// Exactly one variant must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectSpec {
    /// Flat n⁴ component list of an algebraic curvature tensor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature_tensor: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constructor: Option<ConstructorSpec>,
}

/// Exactly one variant must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructorSpec {
    /// Sectional curvature of the constant-curvature model `(κ/2) g ⊙ g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant_curvature: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kulkarni_nomizu: Option<KulkarniNomizuSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypersurface: Option<HypersurfaceDoc>,
    /// Flat N×N symmetric matrix of a curvature operator on planes
    /// (N = n(n-1)/2, lexicographic plane order).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator_matrix: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KulkarniNomizuSpec {
    /// Flat n×n symmetric matrix.
    pub s: Vec<f64>,
    /// Flat n×n symmetric matrix.
    pub t: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypersurfaceDoc {
    /// Principal curvatures; the count must equal `dimension`.
    pub lambdas: Vec<f64>,
    /// Sectional curvature of the ambient space form.
    pub ambient_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    pub degree: usize,
    /// Flat n^degree fully antisymmetric component list.
    pub components: Vec<f64>,
}

/// Requested decision procedures and their parameters.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisRequest {
    /// Partial-trace orders to classify (empty = every order `1..=N`).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub m: Vec<usize>,
    /// Form / Betti degree for degree-indexed criteria.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    /// Integrability exponent (default 2 where needed).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Bound constant of the weighted criterion (default 1).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Weighted-Poincaré coefficient; presence requests the weighted verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// Refined Kato constant: "generic", "form", "einstein-weyl", "zero-scalar".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kato: Option<String>,
    /// Weyl rigidity variant: "generic" or "einstein"; presence (with kappa)
    /// requests the Weyl verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weyl_variant: Option<String>,
    /// The underlying manifold is closed (Betti criteria).
    pub closed: bool,
    pub hypotheses: AnalyticHypotheses,
}

/// Everything the analysis computed, echoing the input for reproducibility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub format_version: u32,
    /// SHA-256 of the canonical serialization of `input`.
    pub input_sha256: String,
    /// Seed used for randomized probes.
    pub seed: u64,
    pub input: InputDocument,
    pub spectrum: SpectrumSection,
    pub classifications: Vec<ClassificationRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<TheoremVerdict>,
    pub identity_checks: Vec<IdentityCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSection {
    /// Ascending eigenvalues of the curvature operator.
    pub eigenvalues: Vec<f64>,
    /// `max(1, |μ_1|, |μ_N|)`.
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub m: usize,
    /// `μ_1 + ... + μ_m`.
    pub prefix_sum: f64,
    /// `prefix_sum / m`, the eigenvalue-floor constant.
    pub kappa_lower_bound: f64,
    pub classification: bochner::Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSection {
    pub scalar_curvature: f64,
    pub norm_scalar_part: f64,
    pub norm_ricci_part: f64,
    pub norm_weyl_part: f64,
    /// `|Rm - (scal + ricci + weyl)| / max(1, |Rm|)`.
    pub reconstruction_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl InputDocument {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        let doc: InputDocument = toml::from_str(text).context("malformed input document")?;
        if doc.format_version != FORMAT_VERSION {
            bail!(
                "unsupported format_version {} (this build reads version {FORMAT_VERSION})",
                doc.format_version
            );
        }
        Ok(doc)
    }

    /// Canonical serialization: the parse result re-serialized, independent
    /// of the formatting of the original file.
    pub fn canonical_toml(&self) -> anyhow::Result<String> {
        toml::to_string(self).context("failed to serialize input document")
    }
}

/// The validated, constructed curvature data behind a document.
struct ResolvedInput {
    operator: CurvatureOperator,
    /// Present unless the object was an operator matrix carrying a component
    /// outside the curvature-tensor symmetry class.
    tensor: Option<CurvatureTensor>,
    form: Option<AlternatingForm>,
    hypersurface: Option<HypersurfaceSpec>,
}

fn resolve(doc: &InputDocument) -> anyhow::Result<ResolvedInput> {
    let ctx = SpaceContext::new(doc.dimension)?;
    let n = ctx.n();

    let variant_count = usize::from(doc.object.curvature_tensor.is_some())
        + usize::from(doc.object.constructor.is_some());
    if variant_count != 1 {
        bail!("exactly one of object.curvature_tensor / object.constructor must be present");
    }

    let mut hypersurface = None;
    let (operator, tensor) = if let Some(components) = &doc.object.curvature_tensor {
        let dense = DenseTensor::from_components(ctx, 4, components.clone())
            .context("object.curvature_tensor")?;
        let rm = CurvatureTensor::new(dense).context("object.curvature_tensor")?;
        (rm.to_operator(), Some(rm))
    } else {
        let ctor = doc.object.constructor.as_ref().unwrap();
        let ctor_count = usize::from(ctor.constant_curvature.is_some())
            + usize::from(ctor.kulkarni_nomizu.is_some())
            + usize::from(ctor.hypersurface.is_some())
            + usize::from(ctor.operator_matrix.is_some());
        if ctor_count != 1 {
            bail!("exactly one constructor variant must be present");
        }
        if let Some(kappa) = ctor.constant_curvature {
            if !kappa.is_finite() {
                bail!("constant_curvature must be finite, got {kappa}");
            }
            let rm = CurvatureTensor::constant_curvature(ctx, kappa);
            (rm.to_operator(), Some(rm))
        } else if let Some(kn) = &ctor.kulkarni_nomizu {
            let s = SymmetricBilinear::new(ctx, kn.s.clone()).context("kulkarni_nomizu.s")?;
            let t = SymmetricBilinear::new(ctx, kn.t.clone()).context("kulkarni_nomizu.t")?;
            let rm = kulkarni_nomizu(&s, &t)?;
            (rm.to_operator(), Some(rm))
        } else if let Some(h) = &ctor.hypersurface {
            if h.lambdas.len() != n {
                bail!(
                    "hypersurface.lambdas has {} entries but dimension = {n}",
                    h.lambdas.len()
                );
            }
            let spec = HypersurfaceSpec::new(h.lambdas.clone(), h.ambient_k)?;
            let rm = spec.tensor()?;
            let op = rm.to_operator();
            hypersurface = Some(spec);
            (op, Some(rm))
        } else {
            let mat = ctor.operator_matrix.as_ref().unwrap();
            let op = CurvatureOperator::new(ctx, mat.clone()).context("operator_matrix")?;
            // An operator matrix may carry a component outside the
            // curvature-symmetry class; tensor-level analyses are skipped then.
            let tensor = op.to_tensor().ok();
            (op, tensor)
        }
    };

    let form = match &doc.form {
        None => None,
        Some(spec) => {
            let dense = DenseTensor::from_components(ctx, spec.degree, spec.components.clone())
                .context("form.components")?;
            Some(AlternatingForm::new(dense).context("form")?)
        }
    };

    Ok(ResolvedInput {
        operator,
        tensor,
        form,
        hypersurface,
    })
}

fn parse_kato(name: &str, n: usize, p: Option<usize>) -> anyhow::Result<KatoConstant> {
    match name {
        "generic" => Ok(KatoConstant::Generic),
        "form" => {
            let ell = p.ok_or_else(|| {
                anyhow!("kato = \"form\" needs analysis.p as the form degree")
            })?;
            Ok(KatoConstant::Form { n, ell })
        }
        "einstein-weyl" => Ok(KatoConstant::EinsteinWeyl { n }),
        "zero-scalar" => Ok(KatoConstant::ZeroScalarRm),
        other => bail!(
            "unknown kato constant '{other}' (expected generic, form, einstein-weyl, zero-scalar)"
        ),
    }
}

fn parse_weyl_variant(name: &str) -> anyhow::Result<WeylVariant> {
    match name {
        "generic" => Ok(WeylVariant::Generic),
        "einstein" => Ok(WeylVariant::Einstein),
        other => bail!("unknown weyl variant '{other}' (expected generic or einstein)"),
    }
}

/// Runs the full analysis for a parsed document.
pub fn analyze(doc: &InputDocument) -> anyhow::Result<ReportDocument> {
    let resolved = resolve(doc)?;
    let seed = doc.seed.unwrap_or(0);
    let canonical = doc.canonical_toml()?;
    let input_sha256 = hex::encode(Sha256::digest(canonical.as_bytes()));

    let report = SpectralReport::from_operator(&resolved.operator);
    let spectrum = SpectrumSection {
        eigenvalues: report.eigenvalues().to_vec(),
        scale: report.scale(),
    };

    let analysis = doc.analysis.clone().unwrap_or_default();
    let requested_m: Vec<usize> = if analysis.m.is_empty() {
        (1..=report.eigenvalues().len()).collect()
    } else {
        analysis.m.clone()
    };
    let mut classifications = Vec::with_capacity(requested_m.len());
    for &m in &requested_m {
        classifications.push(ClassificationRow {
            m,
            prefix_sum: report.prefix_sum(m)?,
            kappa_lower_bound: report.kappa_lower_bound(m)?,
            classification: report.classify_m(m)?,
        });
    }

    let decomposition = match &resolved.tensor {
        Some(rm) if rm.ctx().n() >= 3 => {
            let parts = rm.decompose()?;
            let recon = parts.reconstruct();
            Some(DecompositionSection {
                scalar_curvature: parts.scalar,
                norm_scalar_part: parts.scal_part.norm(),
                norm_ricci_part: parts.ricci_part.norm(),
                norm_weyl_part: parts.weyl.norm(),
                reconstruction_residual: rm.sub(&recon)?.norm() / rm.norm().max(1.0),
            })
        }
        _ => None,
    };

    let verdicts = build_verdicts(doc, &resolved, &report, &analysis)?;
    let identity_checks = run_identity_checks(&resolved, seed)?;

    Ok(ReportDocument {
        format_version: FORMAT_VERSION,
        input_sha256,
        seed,
        input: doc.clone(),
        spectrum,
        classifications,
        decomposition,
        verdicts,
        identity_checks,
    })
}

fn build_verdicts(
    doc: &InputDocument,
    resolved: &ResolvedInput,
    report: &SpectralReport,
    analysis: &AnalysisRequest,
) -> anyhow::Result<Vec<TheoremVerdict>> {
    let mut verdicts = Vec::new();
    if doc.analysis.is_none() {
        return Ok(verdicts);
    }
    let n = doc.dimension;
    let q = analysis.q.unwrap_or(2.0);
    let c = analysis.c.unwrap_or(1.0);
    let hyp = analysis.hypotheses;

    verdicts.push(harmonic_tensor_verdict(report, q, &hyp)?);

    if let Some(p) = analysis.p {
        verdicts.push(form_vanishing_verdict(report, p, q, &hyp)?);
        if let Some(spec) = &resolved.hypersurface {
            verdicts.push(betti_verdict(spec, p, analysis.closed)?);
        }
    }

    if let Some(kappa) = analysis.kappa {
        let kato = match &analysis.kato {
            Some(name) => parse_kato(name, n, analysis.p)?,
            None => KatoConstant::Generic,
        };
        verdicts.push(weighted_tensor_verdict(kappa, q, c, kato, &hyp)?);
        if let Some(variant) = &analysis.weyl_variant {
            verdicts.push(weyl_verdict(n, q, kappa, parse_weyl_variant(variant)?, &hyp)?);
        }
    }

    Ok(verdicts)
}

/// Randomized residual probes re-checking the core identities on this input.
fn run_identity_checks(resolved: &ResolvedInput, seed: u64) -> anyhow::Result<Vec<IdentityCheck>> {
    let ctx = resolved.operator.ctx();
    let n = ctx.n();
    let mut rng = random::rng_from_seed(seed);
    let mut checks = Vec::new();

    let mut push = |name: &str, residual: f64| {
        checks.push(IdentityCheck {
            name: name.to_string(),
            residual,
            tolerance: IDENTITY_TOL,
            pass: residual <= IDENTITY_TOL,
        });
    };

    // Hat-norm identity for forms: the supplied form if any, else a probe.
    let probe;
    let omega = match &resolved.form {
        Some(form) => form,
        None => {
            probe = random::random_form(ctx, 2.min(n - 1), &mut rng)?;
            &probe
        }
    };
    let lhs = hat(omega.tensor()).norm_sq();
    let ell = omega.degree();
    let rhs = (ell * (n - ell)) as f64 * omega.norm_sq();
    push(
        "form_hat_norm",
        (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0),
    );

    if let Some(rm) = &resolved.tensor {
        if n >= 3 {
            let parts = rm.decompose()?;
            let traceless = rm.sub(&parts.scal_part)?;
            let lhs = hat(rm.tensor()).norm_sq();
            let rhs = 4.0 * (n - 1) as f64 * traceless.norm() * traceless.norm()
                - 8.0 * parts.traceless_ricci.norm_sq();
            push(
                "curvature_hat_norm",
                (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0),
            );
        }

        // Weitzenböck pairing against the operator quadratic form.
        let s = random::random_tensor(ctx, 2, &mut rng)?;
        let t = random::random_tensor(ctx, 2, &mut rng)?;
        let lhs = weitzenboeck(rm, &s)?.inner(&t)?;
        let op = rm.to_operator();
        let hat_s = hat(&s);
        let hat_t = hat(&t);
        let mut rhs = 0.0;
        for alpha in 0..ctx.plane_count() {
            for beta in 0..ctx.plane_count() {
                rhs += op.entry(alpha, beta) * hat_s.slice(alpha).inner(hat_t.slice(beta))?;
            }
        }
        push(
            "weitzenboeck_pairing",
            (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0),
        );
    }

    Ok(checks)
}

/// Serializes a report; the output is a deterministic function of the
/// document contents.
pub fn report_to_toml(report: &ReportDocument) -> anyhow::Result<String> {
    toml::to_string(report).context("failed to serialize report")
}
