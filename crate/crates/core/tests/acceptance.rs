//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion does.

mod common;

use std::cell::Cell;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use statrs::function::gamma::gamma;

use zetascope::coefficients::{deepest_coefficient_abs, deepest_coefficient_signed, sign_counts};
use zetascope::lattice_poly::{binomial_series_pow, AlgebraicScalar, Exponent, SparsePolynomial, TruncatedSeries};
use zetascope::oracle::{
    laurent_fit, monomial_laurent_deepest, oscillatory_fit, oscillatory_integral, oscillatory_model,
    ContinuationOptions, ContinuedZeta, CutoffShape, FitOptions, LaurentFit, MonomialWeightSpec,
    PlateauTestFunction, QuadOptions, SignMode,
};
use zetascope::pipeline::{analyze, Analysis, PipelineOptions};
use zetascope::poles::{candidate_poles, default_depth, delta_lattice_points, CandidatePole, Family, Rule};
use zetascope::rational::{int, rat, to_f64, Rational};

use common::{convenient_poly, exponents_up_to, jet, load, resolve_poly, runner, Resolved, CANONICAL};

type Outcome = std::result::Result<String, String>;
type Suite = (&'static str, fn() -> Outcome);

struct Criterion {
    label: &'static str,
    limit: Duration,
}

fn run(c: Criterion, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let (ok, detail) = match result {
        Ok(d) if elapsed <= c.limit => (true, d),
        Ok(d) => (false, format!("{d}; runtime over the {:.0} s budget", c.limit.as_secs_f64())),
        Err(d) => (false, d),
    };
    println!(
        "{} {}: {detail} [{:.2} s]",
        if ok { "PASS" } else { "FAIL" },
        c.label,
        elapsed.as_secs_f64()
    );
    ok
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn analysis(name: &str) -> std::result::Result<Analysis, String> {
    analyze(&load(name), &PipelineOptions::default()).map_err(|e| e.to_string())
}

fn tight_continuation(a: &Analysis, mode: SignMode) -> std::result::Result<ContinuedZeta, String> {
    let options = ContinuationOptions {
        quad: QuadOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            ..ContinuationOptions::default().quad
        },
        ..ContinuationOptions::default()
    };
    ContinuedZeta::for_polynomial(&a.problem.f, &a.poly, &a.fine, &a.problem.phi, mode, options).map_err(|e| e.to_string())
}

fn first_pole_fit(zeta: &ContinuedZeta, lambda: f64, k_max: usize) -> std::result::Result<LaurentFit, String> {
    laurent_fit(zeta, lambda, k_max, &FitOptions::log_spaced(0.02, 0.2, 24)).map_err(|e| e.to_string())
}

fn exact(s: &AlgebraicScalar) -> Option<Rational> {
    s.as_rational()
}

fn residue_x_squared() -> Outcome {
    let a = analysis("square")?;
    let p = &a.poles[0];
    ensure(p.pole.lambda == rat(1, 2) && p.pole.kj == 1, || format!("first pole {:?}", p.pole))?;
    let deep = p.deepest.as_ref().ok_or("no deepest coefficient")?;
    let value = deep.a.as_ref().map_err(Clone::clone)?;
    ensure(exact(value) == Some(int(1)), || format!("a_1,1 = {value:?}, expected 1"))?;
    let fit = first_pole_fit(&tight_continuation(&a, SignMode::Abs)?, 0.5, 1)?;
    let err = (fit.leading() - 1.0).abs();
    ensure(err <= 1e-4, || format!("fitted a_1,1 = {} (error {err:.1e})", fit.leading()))?;
    Ok(format!("a_1,1 = 1 exactly, fit {:.10} (error {err:.1e})", fit.leading()))
}

fn worked_example() -> Outcome {
    let a = analysis("worked")?;
    let p = &a.poles[0];
    ensure(p.pole.lambda == rat(1, 2), || format!("λ_1 = {}", p.pole.lambda))?;
    ensure(p.pole.kj == 2, || format!("k_1 = {}", p.pole.kj))?;
    let deep = p.deepest.as_ref().ok_or("no deepest coefficient")?;
    let value = deep.a.as_ref().map_err(Clone::clone)?;
    ensure(exact(value) == Some(rat(1, 6)), || format!("a_1,2 = {value:?}"))?;
    let fit = first_pole_fit(&tight_continuation(&a, SignMode::Abs)?, 0.5, 2)?;
    let rel = (fit.leading() - 1.0 / 6.0).abs() * 6.0;
    ensure(rel <= 5e-3, || format!("fitted a_1,2 = {} (relative error {rel:.1e})", fit.leading()))?;
    Ok(format!("λ_1 = 1/2, k_1 = 2, a_1,2 = 1/6 exactly, fit {:.8} (relative error {rel:.1e})", fit.leading()))
}

fn fake_pole() -> Outcome {
    let a = analysis("parity")?;
    let idx = a
        .poles
        .iter()
        .position(|p| p.pole.lambda == rat(3, 2))
        .ok_or("λ = 3/2 is not a candidate")?;
    let p = &a.poles[idx];
    let mut nus: Vec<Vec<i64>> = p.pole.cones(2).iter().map(|c| c.nu.clone()).collect();
    for nu in &mut nus {
        nu.sort();
    }
    ensure(nus.contains(&vec![1, 3]), || format!("2-cones at 3/2 carry ν = {nus:?}"))?;
    let parity: Vec<_> = p
        .certificates
        .iter()
        .filter(|c| matches!(c.rule, Rule::ParityMtI | Rule::ParityMtIi) && c.families.contains(&Family::Abs))
        .collect();
    ensure(parity.iter().any(|c| c.from_k == 1 && c.to_k == 2), || {
        format!("parity certificates {:?}", parity.iter().map(|c| (c.rule, c.from_k)).collect::<Vec<_>>())
    })?;

    let zeta = tight_continuation(&a, SignMode::Abs)?;
    let first = &a.poles[0].pole;
    let lead = first_pole_fit(&zeta, to_f64(&first.lambda), first.kj.clamp(1, 3))?;
    let scale = lead.coefficients.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let lam = to_f64(&p.pole.lambda);
    let mut gap = lam - to_f64(&a.poles[idx - 1].pole.lambda);
    if let Some(next) = a.poles.get(idx + 1) {
        gap = gap.min(to_f64(&next.pole.lambda) - lam);
    }
    let hi = (0.5 * gap).min(0.1);
    let fit = laurent_fit(&zeta, lam, 2, &FitOptions::log_spaced(hi / 10.0, hi, 12).symmetric()).map_err(|e| e.to_string())?;
    let worst = fit.coefficients.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    ensure(worst < 1e-3 * scale, || {
        format!("fitted a at 3/2 = {:?} against first-pole scale {scale:.3e}", fit.coefficients)
    })?;
    Ok(format!(
        "ParityMT certificates at 3/2 (ν = 3, 1); fitted |a_1|, |a_2| ≤ {worst:.1e} vs scale {scale:.3e}"
    ))
}

fn cusp() -> Outcome {
    let a = analysis("cusp")?;
    let p = &a.poles[0];
    ensure(p.pole.lambda == rat(5, 6) && p.pole.kj == 1, || format!("first pole {} with k = {}", p.pole.lambda, p.pole.kj))?;
    for ray in [vec![1, 1], vec![1, 2]] {
        ensure(a.fine.rays.contains(&ray) && !a.coarse.rays.contains(&ray), || {
            format!("ray {ray:?} not inserted; smooth rays {:?}", a.fine.rays)
        })?;
    }
    let c = &a.fan_check;
    ensure(c.covering && c.refinement && c.unimodular, || format!("fan check {c:?}"))?;
    Ok(format!("λ_1 = 5/6, k_1 = 1, smooth rays {:?}", a.fine.rays))
}

fn oscillatory() -> Outcome {
    let a = analysis("cube")?;
    let p = &a.poles[0];
    let deep = p.deepest.as_ref().ok_or("no deepest coefficient")?;
    let (re, im) = deep.c_osc.ok_or("no oscillatory coefficient")?;
    let expected = gamma(1.0 / 3.0) / 3f64.sqrt();
    ensure((re - expected).abs() <= 1e-12 * expected && im.abs() <= 1e-12, || {
        format!("engine c_1,1 = {re} + {im}i, expected {expected}")
    })?;
    let quad = QuadOptions {
        abs_tol: 1e-10,
        rel_tol: 1e-8,
        ..QuadOptions::default()
    };
    let samples = (0..16)
        .map(|i| {
            let t = 40.0 * 10f64.powf(i as f64 / 15.0);
            oscillatory_integral(&a.problem.f, &a.problem.phi, t, &quad).map(|v| (t, v))
        })
        .collect::<zetascope::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    let fit = oscillatory_fit(&samples, &oscillatory_model(&[(1.0 / 3.0, 1)])).map_err(|e| e.to_string())?;
    let (fr, fi) = fit.leading;
    let rel = (fr - re).hypot(fi - im) / expected;
    ensure(rel <= 0.05, || format!("fitted c_1,1 = {fr} + {fi}i (relative error {rel:.1e})"))?;

    let w = analysis("worked")?;
    let deep = w.poles[0].deepest.as_ref().ok_or("no deepest coefficient for the worked example")?;
    let (wr, wi) = deep.c_osc.ok_or("no oscillatory coefficient for the worked example")?;
    let part = std::f64::consts::PI.sqrt() / 6.0 * std::f64::consts::FRAC_1_SQRT_2;
    ensure((wr - part).abs() <= 1e-12 && (wi - part).abs() <= 1e-12, || {
        format!("worked example c_1,2 = {wr} + {wi}i, expected {part} (1 + i)")
    })?;
    Ok(format!(
        "cube: engine {re:.10}, fit {fr:.6} + {fi:.1e}i (relative error {rel:.1e}); worked example {wr:.10} (1 + i)"
    ))
}

fn first_poles(r: &Resolved, count: usize) -> zetascope::Result<Vec<CandidatePole>> {
    let n = r.fine.dim;
    let depth = default_depth(&r.rays, n);
    Ok(candidate_poles(&r.fine, &r.rays, &depth)?.into_iter().take(count).collect())
}

fn fail(e: impl std::fmt::Display) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

fn same(a: &AlgebraicScalar, b: &AlgebraicScalar) -> bool {
    a.sub(b).is_zero()
}

fn quadrant_identity() -> Outcome {
    let charts = Cell::new(0usize);
    runner(200, 11)
        .run(&convenient_poly(), |f| {
            let r = resolve_poly(&f).map_err(fail)?;
            for chart in &r.charts {
                charts.set(charts.get() + 1);
                for nu in exponents_up_to(f.dim(), 4) {
                    let nu: Vec<i64> = nu.as_i64();
                    let s = sign_counts(chart, &nu).map_err(fail)?;
                    let expected: i64 = nu.iter().map(|v| if v % 2 == 0 { 2 } else { 0 }).product();
                    prop_assert_eq!(s.c_plus + s.c_minus, expected, "f = {}, ν = {:?}", f, nu);
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("200 polynomials, {} charts", charts.get()))
}

fn signed_sum() -> Outcome {
    let checked = Cell::new(0usize);
    let strategy = convenient_poly().prop_flat_map(|f| {
        let n = f.dim();
        (Just(f), jet(n, 4))
    });
    runner(200, 12)
        .run(&strategy, |(f, j)| {
            let r = resolve_poly(&f).map_err(fail)?;
            for pole in first_poles(&r, 4).map_err(fail)? {
                if pole.is_integer || pole.kj != f.dim() {
                    continue;
                }
                let a = deepest_coefficient_abs(&pole, &r.fine, &r.charts, &j).map_err(fail)?;
                let s = deepest_coefficient_signed(&pole, &r.fine, &r.charts, &j).map_err(fail)?;
                prop_assert!(s.laurent_valid);
                prop_assert!(same(&s.b_plus.add(&s.b_minus), &a), "f = {}, λ = {}", f, pole.lambda);
                checked.set(checked.get() + 1);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    ensure(checked.get() >= 50, || format!("only {} non-vacuous poles", checked.get()))?;
    Ok(format!("200 cases, {} non-integer poles of full order", checked.get()))
}

fn binomial_inverse() -> Outcome {
    let strategy = (
        prop::collection::vec(-5i64..=5, exponents_up_to(2, 3).len()),
        -6i64..=6,
        1i64..=5,
    );
    runner(200, 13)
        .run(&strategy, |(cs, p, q)| {
            let u = SparsePolynomial::from_terms(
                2,
                exponents_up_to(2, 3)
                    .into_iter()
                    .zip(cs)
                    .filter(|(e, _)| !e.is_zero())
                    .map(|(e, c)| (e, rat(c, 3))),
            )
            .map_err(fail)?;
            let s = rat(p, q);
            let u = TruncatedSeries::from_polynomial(&u, 6);
            let up = binomial_series_pow(&u, &s, 6).map_err(fail)?;
            let down = binomial_series_pow(&u, &(-s.clone()), 6).map_err(fail)?;
            prop_assert_eq!(up.mul(&down), TruncatedSeries::one(2, 6), "s = {}", s);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("200 cases to degree 6".into())
}

fn sample_points(n: usize) -> Vec<Vec<Rational>> {
    vec![
        (0..n).map(|i| rat(i as i64 + 2, i as i64 + 3)).collect(),
        (0..n).map(|i| rat(if i % 2 == 0 { -3 } else { 5 }, 2 + i as i64)).collect(),
    ]
}

fn pullback_identity() -> Outcome {
    let charts = Cell::new(0usize);
    runner(200, 14)
        .run(&convenient_poly(), |f| {
            let r = resolve_poly(&f).map_err(fail)?;
            let n = f.dim();
            for chart in &r.charts {
                charts.set(charts.get() + 1);
                let gens = &chart.cone.generators;
                let exceptional = SparsePolynomial::monomial(
                    Exponent::new(chart.l_vector.iter().map(|&v| v as u32).collect()),
                    Rational::one(),
                );
                let pulled = f.monomial_pullback(gens).map_err(fail)?;
                prop_assert_eq!(&pulled, &(&chart.f_sigma * &exceptional));
                prop_assert!(!chart.f_sigma.constant_term().is_zero());
                for y in sample_points(n) {
                    let x: Vec<Rational> = (0..n)
                        .map(|j| {
                            (0..n).fold(Rational::one(), |acc, i| {
                                acc * zetascope::rational::pow_int(&y[i], gens[i][j])
                            })
                        })
                        .collect();
                    prop_assert_eq!(f.eval(&x), chart.f_sigma.eval(&y) * exceptional.eval(&y));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("200 polynomials, {} charts", charts.get()))
}

fn jet_linearity_and_locality() -> Outcome {
    let checked = Cell::new(0usize);
    let strategy = convenient_poly().prop_flat_map(|f| {
        let n = f.dim();
        (Just(f), jet(n, 4), jet(n, 4), -3i64..=3, 1i64..=3, jet(n, 6))
    });
    runner(200, 15)
        .run(&strategy, |(f, j1, j2, c1, c2, noise)| {
            let r = resolve_poly(&f).map_err(fail)?;
            let n = f.dim();
            for pole in first_poles(&r, 8).map_err(fail)? {
                if pole.kj != n || pole.cones(n).is_empty() {
                    continue;
                }
                let a = |j: &SparsePolynomial| deepest_coefficient_abs(&pole, &r.fine, &r.charts, j);
                if let Err(zetascope::Error::NotApplicable(_)) = a(&j1) {
                    continue;
                }
                let (c1, c2) = (int(c1), rat(1, c2));
                let combo = &j1.scale(&c1) + &j2.scale(&c2);
                let lhs = a(&combo).map_err(fail)?;
                let rhs = a(&j1).map_err(fail)?.scale(&c1).add(&a(&j2).map_err(fail)?.scale(&c2));
                prop_assert!(same(&lhs, &rhs), "linearity fails for f = {}, λ = {}", f, pole.lambda);

                let delta = delta_lattice_points(&pole, n, &r.fine).map_err(fail)?;
                let outside = SparsePolynomial::from_terms(
                    n,
                    noise.terms().filter(|(e, _)| !delta.contains(e)).map(|(e, c)| (e.clone(), c.clone())),
                )
                .map_err(fail)?;
                let inside = SparsePolynomial::from_terms(
                    n,
                    j1.terms().filter(|(e, _)| delta.contains(e)).map(|(e, c)| (e.clone(), c.clone())),
                )
                .map_err(fail)?;
                let base = a(&j1).map_err(fail)?;
                prop_assert!(same(&a(&(&j1 + &outside)).map_err(fail)?, &base), "adding terms outside Δ changed a");
                prop_assert!(same(&a(&inside).map_err(fail)?, &base), "restricting to Δ changed a");
                checked.set(checked.get() + 1);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    ensure(checked.get() >= 50, || format!("only {} poles of full order", checked.get()))?;
    Ok(format!("200 cases, {} poles of full order", checked.get()))
}

#[derive(Clone, Debug)]
struct WeightCase {
    slopes: Vec<i64>,
    shifts: Vec<i64>,
    lambda: Rational,
    absolute: bool,
    jet: SparsePolynomial,
}

fn weight_case() -> impl Strategy<Value = WeightCase> {
    (
        prop::collection::vec(1i64..=3, 2),
        prop::collection::vec(0i64..=1, 2),
        0i64..=2,
        any::<bool>(),
        prop::collection::vec(-3i64..=3, exponents_up_to(2, 4).len()),
        1i64..=3,
    )
        .prop_filter_map("needs a common pole of order two", |(slopes, shifts, nu0, absolute, cs, lead)| {
            let lambda = rat(shifts[0] + 1 + nu0, slopes[0]);
            let nu1 = &lambda * int(slopes[1]) - int(shifts[1] + 1);
            if !nu1.is_integer() || nu1 < int(0) || nu1 > int(3) {
                return None;
            }
            let nu1 = nu1.to_integer().try_into().ok()?;
            let key = Exponent::new(vec![nu0 as u32, nu1]);
            let terms = exponents_up_to(2, 4)
                .into_iter()
                .zip(cs)
                .map(|(e, c)| if e == key { (e, int(lead)) } else { (e, int(c)) });
            let jet = SparsePolynomial::from_terms(2, terms).ok()?;
            let absolute = absolute && nu0 % 2 == 0 && nu1 % 2 == 0;
            Some(WeightCase {
                slopes,
                shifts,
                lambda,
                absolute,
                jet,
            })
        })
}

fn monomial_weights() -> Outcome {
    let worst = Cell::new(0.0f64);
    runner(10, 16)
        .run(&weight_case(), |case| {
            let slopes: Vec<Rational> = case.slopes.iter().map(|&v| int(v)).collect();
            let shifts: Vec<Rational> = case.shifts.iter().map(|&v| int(v)).collect();
            let spec = MonomialWeightSpec {
                slopes: slopes.clone(),
                shifts: shifts.clone(),
                absolute: case.absolute,
            };
            let predicted = to_f64(&monomial_laurent_deepest(&spec, &case.lambda, &case.jet).map_err(fail)?);
            prop_assume!(predicted != 0.0);
            let phi = PlateauTestFunction::new(case.jet.clone(), rat(1, 2), int(1))
                .map_err(fail)?
                .with_shape(CutoffShape::Product);
            let zeta = ContinuedZeta::for_monomial_weight(&slopes, &shifts, !case.absolute, &phi, ContinuationOptions::default())
                .map_err(fail)?;
            let lam = to_f64(&case.lambda);
            let ladder = zeta.exponent_ladder(lam + 1.0);
            let below = ladder.iter().map(|v| v.0).filter(|v| *v < lam - 1e-9).fold(f64::NAN, f64::max);
            let above = ladder.iter().map(|v| v.0).filter(|v| *v > lam + 1e-9).fold(f64::INFINITY, f64::min);
            let opts = if below.is_nan() {
                FitOptions::log_spaced(0.02, 0.2, 24)
            } else {
                let hi = (0.5 * (lam - below).min(above - lam)).min(0.1);
                FitOptions::log_spaced(hi / 10.0, hi, 12).symmetric()
            };
            let fit = laurent_fit(&zeta, lam, 2, &opts).map_err(fail)?;
            let rel = (fit.leading() - predicted).abs() / predicted.abs();
            worst.set(worst.get().max(rel));
            prop_assert!(rel <= 1e-3, "{:?}: predicted {}, fitted {}", case, predicted, fit.leading());
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("10 weights, worst relative error {:.1e}", worst.get()))
}

fn property_suites() -> Outcome {
    let suites: [Suite; 6] = [
        ("quadrant counts", quadrant_identity),
        ("signed sum", signed_sum),
        ("binomial inverse", binomial_inverse),
        ("pullback", pullback_identity),
        ("jet linearity and Δ-locality", jet_linearity_and_locality),
        ("monomial weights", monomial_weights),
    ];
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    for (name, suite) in suites {
        let start = Instant::now();
        match suite() {
            Ok(d) => lines.push(format!("{name}: {d} ({:.1} s)", start.elapsed().as_secs_f64())),
            Err(e) => failed.push(format!("{name}: {e}")),
        }
    }
    if failed.is_empty() {
        Ok(lines.join("; "))
    } else {
        Err(failed.join("; "))
    }
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_zetascope");
    let render = |name: &str| -> std::result::Result<Vec<u8>, String> {
        let out = Command::new(bin)
            .args(["analyze", common::data_path(name).to_str().expect("utf-8 path"), "--format", "json"])
            .env("ZETASCOPE_THREADS", "1")
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("{name}: exit {:?}", out.status.code()))?;
        Ok(out.stdout)
    };
    for name in CANONICAL {
        let (first, second) = (render(name)?, render(name)?);
        ensure(!first.is_empty() && first == second, || format!("{name}: reports differ"))?;
    }
    Ok(format!("{} inputs byte-identical", CANONICAL.len()))
}

#[test]
fn acceptance() {
    let secs = Duration::from_secs;
    let results = [
        run(Criterion { label: "criterion 1 (x² residue)", limit: secs(1) }, residue_x_squared),
        run(Criterion { label: "criterion 2 (worked example)", limit: secs(60) }, worked_example),
        run(Criterion { label: "criterion 3 (fake pole)", limit: secs(60) }, fake_pole),
        run(Criterion { label: "criterion 4 (cusp)", limit: secs(1) }, cusp),
        run(Criterion { label: "criterion 5 (oscillatory)", limit: secs(60) }, oscillatory),
        run(Criterion { label: "criterion 6 (property suites)", limit: secs(300) }, property_suites),
        run(Criterion { label: "criterion 7 (determinism)", limit: secs(60) }, determinism),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
