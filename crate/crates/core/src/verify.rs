//! Numerical cross-checks of an analysis against the oracle.

use crate::error::{Error, Result};
use crate::oracle::{
    laurent_fit, oscillatory_fit, oscillatory_integral, oscillatory_model, ContinuationOptions, ContinuedZeta, FitOptions,
    LaurentFit, QuadOptions, SignMode,
};
use crate::pipeline::{Analysis, PoleAnalysis};
use crate::poles::Family;
use crate::rational::to_f64;

/// Absolute and relative slack for exact-versus-fitted comparisons.
pub const COEFFICIENT_ABS_TOL: f64 = 1e-4;
pub const COEFFICIENT_REL_TOL: f64 = 5e-3;
/// Certified-zero coefficients must fit below this fraction of the first pole's coefficient.
pub const VANISHING_REL_TOL: f64 = 1e-3;
pub const OSCILLATORY_REL_TOL: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub predicted: f64,
    pub fitted: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: String, predicted: f64, fitted: f64, allowed: f64) -> Self {
        let abs_err = (fitted - predicted).abs();
        let rel_err = if predicted == 0.0 { f64::INFINITY } else { abs_err / predicted.abs() };
        Check {
            name,
            predicted,
            fitted,
            abs_err,
            rel_err,
            pass: abs_err <= allowed,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Verification {
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Largest pole index verified when none is requested.
const DEFAULT_POLES: usize = 3;
const FIRST_POLE_RANGE: (f64, f64) = (0.02, 0.2);
const SAMPLES: usize = 24;

fn offsets(analysis: &Analysis, j: usize) -> FitOptions {
    if j == 1 {
        return FitOptions::log_spaced(FIRST_POLE_RANGE.0, FIRST_POLE_RANGE.1, SAMPLES);
    }
    let lam = |i: usize| to_f64(&analysis.poles[i - 1].pole.lambda);
    let mut gap = lam(j) - lam(j - 1);
    if j < analysis.poles.len() {
        gap = gap.min(lam(j + 1) - lam(j));
    }
    let hi = (0.5 * gap).min(0.1);
    FitOptions::log_spaced(hi / 10.0, hi, SAMPLES / 2).symmetric()
}

fn continuation(analysis: &Analysis, mode: SignMode, tol: f64) -> Result<ContinuedZeta> {
    let opts = ContinuationOptions {
        quad: QuadOptions {
            abs_tol: tol * 1e-5,
            rel_tol: tol * 1e-3,
            ..ContinuationOptions::default().quad
        },
        ..ContinuationOptions::default()
    };
    ContinuedZeta::for_polynomial(&analysis.problem.f, &analysis.poly, &analysis.fine, &analysis.problem.phi, mode, opts)
}

fn fit_pole(zeta: &ContinuedZeta, analysis: &Analysis, p: &PoleAnalysis) -> Result<LaurentFit> {
    let n = analysis.problem.dim();
    let k_max = p.pole.kj.clamp(1, n + 1);
    laurent_fit(zeta, to_f64(&p.pole.lambda), k_max, &offsets(analysis, p.pole.index))
}

/// Fits the Laurent expansion of the continued zeta integral at the requested
/// pole (or the first few) and compares with the exact predictions. The first
/// pole is always fitted: its leading coefficient sets the scale for vanishing checks.
pub fn verify(analysis: &Analysis, pole: Option<usize>, tol: f64) -> Result<Verification> {
    let n = analysis.problem.dim();
    let mut out = Verification::default();
    if n > 2 {
        out.notes.push("numerical verification is limited to one and two variables".into());
        return Ok(out);
    }
    if analysis.poles.is_empty() || analysis.poles[0].pole.index != 1 {
        return Err(Error::input("verification needs the analysis of the first pole"));
    }
    let abs = match continuation(analysis, SignMode::Abs, tol) {
        Err(Error::Unsupported(why)) => {
            out.notes.push(format!("numerical verification skipped: {why}"));
            return Ok(out);
        }
        other => other?,
    };
    let first = fit_pole(&abs, analysis, &analysis.poles[0])?;
    let scale = first.coefficients.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let selected: Vec<&PoleAnalysis> = match pole {
        Some(j) => analysis.poles.iter().filter(|p| p.pole.index == j).collect(),
        None => analysis.poles.iter().take(DEFAULT_POLES).collect(),
    };
    if selected.is_empty() {
        return Err(Error::input(format!("pole {} is not part of the analysis", pole.unwrap_or(0))));
    }
    let mut signed: Option<(ContinuedZeta, ContinuedZeta)> = None;
    for p in selected {
        let j = p.pole.index;
        let fit = if j == 1 { first.clone() } else { fit_pole(&abs, analysis, p)? };
        out.notes.push(format!(
            "pole {j}: Laurent fit relative residual {:.1e}, condition {:.1e}",
            fit.residual,
            fit.condition
        ));
        let from = p.vanishing_from.get(&Family::Abs).copied();
        for (i, &c) in fit.coefficients.iter().enumerate() {
            let k = i + 1;
            if from.is_some_and(|f| k >= f && k <= p.pole.kj) {
                out.checks.push(Check::new(
                    format!("pole {j}: a_{j},{k} vanishes"),
                    0.0,
                    c,
                    VANISHING_REL_TOL * scale,
                ));
            }
        }
        let Some(deep) = &p.deepest else { continue };
        if let Ok(a) = &deep.a {
            let predicted = a.to_f64();
            let fitted = fit.coefficients.get(n - 1).copied().unwrap_or(f64::NAN);
            let allowed = COEFFICIENT_ABS_TOL.max(COEFFICIENT_REL_TOL * predicted.abs());
            out.checks.push(Check::new(format!("pole {j}: a_{j},{n}"), predicted, fitted, allowed));
        }
        if let Ok(s) = &deep.signed {
            if s.laurent_valid && p.pole.kj == n {
                if signed.is_none() {
                    signed = Some((continuation(analysis, SignMode::Plus, tol)?, continuation(analysis, SignMode::Minus, tol)?));
                }
                let (zp, zm) = signed.as_ref().expect("just built");
                for (label, zeta, b) in [("a_plus", zp, &s.b_plus), ("a_minus", zm, &s.b_minus)] {
                    let fit = fit_pole(zeta, analysis, p)?;
                    let predicted = b.to_f64();
                    let fitted = fit.coefficients.get(n - 1).copied().unwrap_or(f64::NAN);
                    let allowed = COEFFICIENT_ABS_TOL.max(COEFFICIENT_REL_TOL * predicted.abs());
                    out.checks.push(Check::new(format!("pole {j}: {label}_{j},{n}"), predicted, fitted, allowed));
                }
            }
        }
        if n == 1 && j == 1 {
            if let Some((re, im)) = deep.c_osc {
                out.checks.push(oscillatory_check(analysis, p, (re, im), tol)?);
            }
        }
    }
    Ok(out)
}

fn default_t_grid() -> Vec<f64> {
    (0..16).map(|i| 40.0 * 10f64.powf(i as f64 / 15.0)).collect()
}

fn oscillatory_check(analysis: &Analysis, p: &PoleAnalysis, predicted: (f64, f64), tol: f64) -> Result<Check> {
    use rayon::prelude::*;
    let grid = analysis.problem.spec.options.t_grid.clone().unwrap_or_else(default_t_grid);
    let quad = QuadOptions {
        abs_tol: tol * 1e-2,
        rel_tol: tol,
        ..QuadOptions::default()
    };
    let samples = grid
        .par_iter()
        .map(|&t| Ok((t, oscillatory_integral(&analysis.problem.f, &analysis.problem.phi, t, &quad)?)))
        .collect::<Result<Vec<_>>>()?;
    let model = oscillatory_model(&[(to_f64(&p.pole.lambda), p.pole.kj)]);
    let fit = oscillatory_fit(&samples, &model)?;
    let (pr, pi) = predicted;
    let (fr, fi) = fit.leading;
    let modulus = pr.hypot(pi);
    let abs_err = (fr - pr).hypot(fi - pi);
    Ok(Check {
        name: format!("pole {}: |c_osc|", p.pole.index),
        predicted: modulus,
        fitted: fr.hypot(fi),
        abs_err,
        rel_err: if modulus > 0.0 { abs_err / modulus } else { f64::INFINITY },
        pass: abs_err <= OSCILLATORY_REL_TOL * modulus.max(1e-12),
    })
}
