//! Built-in example corpus: canonical inputs with known outcomes, run end to
//! end through the analysis pipeline. Exercises every constructor variant
//! and the boundary cases of the decision procedures.

use std::process::ExitCode;

use bochner::decisions::{umbilic_verdict, AnalyticHypotheses, UmbilicSpec};
use bochner::random;
use bochner::space::SpaceContext;
use bochner::Conclusion;

use crate::document::{
    self, AnalysisRequest, ConstructorSpec, HypersurfaceDoc, InputDocument, ObjectSpec,
};

/// Seed for the random Bianchi-tensor cases; fixed so corpus output is
/// stable across runs.
const CORPUS_SEED: u64 = 0x0c0_97a5;

struct Case {
    name: &'static str,
    doc: InputDocument,
    /// (criterion, conclusion) pairs that must appear among the verdicts.
    expect: Vec<(&'static str, Conclusion)>,
}

fn constructor(ctor: ConstructorSpec) -> ObjectSpec {
    ObjectSpec {
        curvature_tensor: None,
        constructor: Some(ctor),
    }
}

fn empty_ctor() -> ConstructorSpec {
    ConstructorSpec {
        constant_curvature: None,
        kulkarni_nomizu: None,
        hypersurface: None,
        operator_matrix: None,
    }
}

fn cases() -> Vec<Case> {
    let mut cases = Vec::new();

    // Constant-curvature models: positive operator, harmonic tensors vanish.
    for n in 3..=6usize {
        cases.push(Case {
            name: match n {
                3 => "constant_curvature_n3",
                4 => "constant_curvature_n4",
                5 => "constant_curvature_n5",
                _ => "constant_curvature_n6",
            },
            doc: InputDocument {
                format_version: 1,
                dimension: n,
                seed: Some(1),
                object: constructor(ConstructorSpec {
                    constant_curvature: Some(1.0),
                    ..empty_ctor()
                }),
                form: None,
                analysis: Some(AnalysisRequest {
                    m: vec![n.div_ceil(2)],
                    q: Some(2.0),
                    hypotheses: AnalyticHypotheses {
                        complete_noncompact: true,
                        ..AnalyticHypotheses::default()
                    },
                    ..AnalysisRequest::default()
                }),
            },
            expect: vec![("harmonic_tensor_vanishing", Conclusion::Vanishes)],
        });
    }

    // Unit sphere as a hypersurface of flat space: λ ≡ 1, K = 0.
    cases.push(Case {
        name: "unit_sphere_hypersurface",
        doc: InputDocument {
            format_version: 1,
            dimension: 4,
            seed: Some(2),
            object: constructor(ConstructorSpec {
                hypersurface: Some(HypersurfaceDoc {
                    lambdas: vec![1.0; 4],
                    ambient_k: 0.0,
                }),
                ..empty_ctor()
            }),
            form: None,
            analysis: Some(AnalysisRequest {
                p: Some(1),
                closed: true,
                ..AnalysisRequest::default()
            }),
        },
        expect: vec![("betti_vanishing", Conclusion::BettiRangeZero)],
    });

    // Boundary case: λ = (1, 1, -1) in ambient curvature 1 sits exactly on
    // the bound, so harmonic 1-forms are parallel rather than zero.
    cases.push(Case {
        name: "parallel_boundary_hypersurface",
        doc: InputDocument {
            format_version: 1,
            dimension: 3,
            seed: Some(3),
            object: constructor(ConstructorSpec {
                hypersurface: Some(HypersurfaceDoc {
                    lambdas: vec![1.0, 1.0, -1.0],
                    ambient_k: 1.0,
                }),
                ..empty_ctor()
            }),
            form: None,
            analysis: Some(AnalysisRequest {
                p: Some(1),
                closed: true,
                ..AnalysisRequest::default()
            }),
        },
        expect: vec![("betti_vanishing", Conclusion::Parallel)],
    });

    // Random algebraic curvature tensors: identity checks on generic input.
    for n in 3..=6usize {
        let ctx = SpaceContext::new(n).unwrap();
        let mut rng = random::trial_rng(CORPUS_SEED, n as u64);
        let rm = random::random_curvature_tensor(ctx, &mut rng).unwrap();
        cases.push(Case {
            name: match n {
                3 => "random_bianchi_n3",
                4 => "random_bianchi_n4",
                5 => "random_bianchi_n5",
                _ => "random_bianchi_n6",
            },
            doc: InputDocument {
                format_version: 1,
                dimension: n,
                seed: Some(4),
                object: ObjectSpec {
                    curvature_tensor: Some(rm.tensor().components().to_vec()),
                    constructor: None,
                },
                form: None,
                analysis: None,
            },
            expect: Vec::new(),
        });
    }

    // Ricci-flat hypothesis with an everywhere-nonnegative operator: the
    // Weyl rigidity chain upgrades to flatness.
    let ctx = SpaceContext::new(4).unwrap();
    let count = ctx.plane_count();
    let mut identity = vec![0.0; count * count];
    for a in 0..count {
        identity[a * count + a] = 1.0;
    }
    cases.push(Case {
        name: "ricci_flat_identity_operator",
        doc: InputDocument {
            format_version: 1,
            dimension: 4,
            seed: Some(5),
            object: constructor(ConstructorSpec {
                operator_matrix: Some(identity),
                ..empty_ctor()
            }),
            form: None,
            analysis: Some(AnalysisRequest {
                m: vec![2],
                q: Some(2.0),
                kappa: Some(0.0),
                weyl_variant: Some("generic".to_string()),
                hypotheses: AnalyticHypotheses {
                    ricci_flat: true,
                    complete_noncompact: true,
                    connected: true,
                    divergence_free_weyl: true,
                    ..AnalyticHypotheses::default()
                },
                ..AnalysisRequest::default()
            }),
        },
        expect: vec![("weyl_rigidity", Conclusion::Flat)],
    });

    cases
}

pub fn run() -> ExitCode {
    let mut ok = true;

    for case in cases() {
        println!("== case: {} ==", case.name);
        let report = match document::analyze(&case.doc) {
            Ok(report) => report,
            Err(e) => {
                println!("  ERROR: {e:#}");
                ok = false;
                continue;
            }
        };
        let eigenvalues: Vec<String> = report
            .spectrum
            .eigenvalues
            .iter()
            .map(|v| format!("{v:.6}"))
            .collect();
        println!("  spectrum: [{}]", eigenvalues.join(", "));
        if let Some(d) = &report.decomposition {
            println!(
                "  decomposition: scal = {:.6}, |scal part| = {:.6}, |ricci part| = {:.6}, |weyl| = {:.6}",
                d.scalar_curvature, d.norm_scalar_part, d.norm_ricci_part, d.norm_weyl_part
            );
        }
        for verdict in &report.verdicts {
            println!(
                "  verdict {}: {}{}",
                verdict.criterion,
                verdict.conclusion,
                if verdict.marginal { " (marginal)" } else { "" }
            );
        }
        for check in &report.identity_checks {
            println!(
                "  check {}: residual {:.3e} tolerance {:.1e} {}",
                check.name,
                check.residual,
                check.tolerance,
                if check.pass { "PASS" } else { "FAIL" }
            );
            ok &= check.pass;
        }
        for (criterion, conclusion) in &case.expect {
            let found = report
                .verdicts
                .iter()
                .any(|v| v.criterion == *criterion && v.conclusion == *conclusion);
            if !found {
                println!("  MISMATCH: expected {criterion} -> {conclusion}");
                ok = false;
            }
        }
    }

    // Totally umbilical submanifold of a flat ambient space: |H| alone makes
    // the intrinsic operator positive. No document form exists for this
    // criterion, so it runs against the library directly.
    println!("== case: umbilic_flat_ambient ==");
    match UmbilicSpec::new(4, 1.0, vec![0.0; 6]).and_then(|spec| umbilic_verdict(&spec, 1, true)) {
        Ok(verdict) => {
            println!(
                "  verdict {}: {}{}",
                verdict.criterion,
                verdict.conclusion,
                if verdict.marginal { " (marginal)" } else { "" }
            );
            if verdict.conclusion != Conclusion::BettiRangeZero {
                println!("  MISMATCH: expected betti_range_zero");
                ok = false;
            }
        }
        Err(e) => {
            println!("  ERROR: {e}");
            ok = false;
        }
    }

    println!();
    if ok {
        println!("corpus: all checks pass");
        ExitCode::SUCCESS
    } else {
        println!("corpus: FAILURES detected");
        ExitCode::from(1)
    }
}
