#![allow(dead_code)]

use std::path::PathBuf;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use zetascope::fan::{all_charts, resolve, ChartData, Fan, SubdivisionOptions};
use zetascope::lattice_poly::{Exponent, SparsePolynomial};
use zetascope::newton::{newton_polyhedron, NewtonPolyhedron};
use zetascope::poles::{ray_table, RayData};
use zetascope::problem::Problem;
use zetascope::rational::{int, Rational};
use zetascope::Result;

pub const CANONICAL: [&str; 5] = ["square", "cube", "cusp", "worked", "parity"];

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(format!("{name}.json"))
}

pub fn load(name: &str) -> Problem {
    let text = std::fs::read_to_string(data_path(name)).expect("test input");
    Problem::parse(&text).expect("valid test input")
}

/// A runner whose random stream is fixed by `seed`.
pub fn runner(cases: u32, seed: u8) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn nonzero_coef() -> impl Strategy<Value = i64> {
    prop_oneof![-3i64..=-1, 1i64..=3]
}

/// Convenient polynomials with `f(0) = 0` in two or three variables: a pure
/// power per axis plus up to three mixed terms.
pub fn convenient_poly() -> impl Strategy<Value = SparsePolynomial> {
    (2usize..=3)
        .prop_flat_map(|n| {
            let top = if n == 2 { 6u32 } else { 4 };
            (
                Just(n),
                prop::collection::vec((2u32..=top, nonzero_coef()), n),
                prop::collection::vec((prop::collection::vec(0u32..=top - 1, n), nonzero_coef()), 0..=3),
            )
        })
        .prop_filter_map("needs a convenient support", |(n, pure, mixed)| {
            let mut terms: Vec<(Exponent, Rational)> = pure
                .iter()
                .enumerate()
                .map(|(i, &(d, c))| (Exponent::unit(n, i, d), int(c)))
                .collect();
            for (e, c) in mixed {
                if e.iter().sum::<u32>() >= 2 {
                    terms.push((Exponent::new(e), int(c)));
                }
            }
            let f = SparsePolynomial::from_terms(n, terms).ok()?;
            zetascope::newton::is_convenient(&f).convenient.then_some(f)
        })
}

/// Dense jets with small integer coefficients up to total degree `degree`.
pub fn jet(n: usize, degree: u32) -> impl Strategy<Value = SparsePolynomial> {
    let exps = exponents_up_to(n, degree);
    prop::collection::vec(-4i64..=4, exps.len()).prop_map(move |cs| {
        SparsePolynomial::from_terms(n, exps.iter().cloned().zip(cs.into_iter().map(int))).expect("jet")
    })
}

pub fn exponents_up_to(n: usize, degree: u32) -> Vec<Exponent> {
    let mut out = vec![Exponent::zeros(n)];
    for axis in 0..n {
        let mut next = Vec::new();
        for e in &out {
            let used: u32 = e.total_degree();
            for k in 0..=degree - used {
                let mut v = e.entries().to_vec();
                v[axis] = k;
                next.push(Exponent::new(v));
            }
        }
        out = next;
    }
    out.sort();
    out.dedup();
    out
}

pub struct Resolved {
    pub f: SparsePolynomial,
    pub poly: NewtonPolyhedron,
    pub coarse: Fan,
    pub fine: Fan,
    pub charts: Vec<ChartData>,
    pub rays: Vec<RayData>,
}

pub fn resolve_poly(f: &SparsePolynomial) -> Result<Resolved> {
    let poly = newton_polyhedron(f)?;
    let (coarse, fine) = resolve(&poly, f, SubdivisionOptions::default())?;
    let charts = all_charts(&fine, f, &poly)?;
    let rays = ray_table(&fine, &poly)?;
    Ok(Resolved {
        f: f.clone(),
        poly,
        coarse,
        fine,
        charts,
        rays,
    })
}
