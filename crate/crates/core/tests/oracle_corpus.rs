mod common;

use zetascope::oracle::{laurent_fit, zeta_quadrature, ContinuationOptions, ContinuedZeta, FitOptions, QuadOptions, SignMode};
use zetascope::pipeline::{analyze, Analysis, PipelineOptions};
use zetascope::verify::verify;

use common::load;

fn analysis(name: &str) -> Analysis {
    analyze(&load(name), &PipelineOptions::default()).expect("analysis")
}

fn continued(a: &Analysis, mode: SignMode) -> ContinuedZeta {
    ContinuedZeta::for_polynomial(&a.problem.f, &a.poly, &a.fine, &a.problem.phi, mode, ContinuationOptions::default())
        .expect("continuation")
}

#[test]
fn corpus_verifies() {
    for name in ["square", "cube", "worked", "parity"] {
        let a = analysis(name);
        let v = verify(&a, None, 1e-8).expect("verification runs");
        assert!(!v.checks.is_empty(), "{name}: nothing was checked");
        for c in &v.checks {
            assert!(c.pass, "{name}: {} predicted {}, fitted {}", c.name, c.predicted, c.fitted);
        }
    }
}

#[test]
fn zero_curves_through_the_charts_skip_verification() {
    let v = verify(&analysis("cusp"), None, 1e-8).expect("verification runs");
    assert!(v.checks.is_empty());
    assert!(v.notes.iter().any(|n| n.contains("skipped")), "{:?}", v.notes);
}

#[test]
fn continuation_matches_direct_quadrature_right_of_zero() {
    let quad = QuadOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-10,
        ..QuadOptions::default()
    };
    for name in ["square", "cube", "worked", "parity"] {
        let a = analysis(name);
        for mode in [SignMode::Abs, SignMode::Plus, SignMode::Minus] {
            let zeta = continued(&a, mode);
            for lambda in [0.4, 1.7] {
                let direct = zeta_quadrature(&a.problem.f, &a.problem.phi, lambda, mode, &quad).expect("direct");
                let series = zeta.eval(lambda).expect("continued");
                assert!(
                    (direct - series).abs() <= 1e-6 * direct.abs().max(1e-3),
                    "{name} {mode:?} at {lambda}: direct {direct}, continued {series}"
                );
            }
        }
    }
}

#[test]
fn deepest_fit_is_stable_under_halving_offsets() {
    for (name, k) in [("square", 1), ("worked", 2)] {
        let a = analysis(name);
        let zeta = continued(&a, SignMode::Abs);
        let opts = FitOptions::log_spaced(0.02, 0.2, 24);
        let full = laurent_fit(&zeta, 0.5, k, &opts).expect("fit");
        let half = laurent_fit(&zeta, 0.5, k, &opts.halved()).expect("fit");
        let rel = (full.leading() - half.leading()).abs() / full.leading().abs();
        assert!(rel < 1e-3, "{name}: {} vs {}", full.leading(), half.leading());
    }
}
