//! Exact deepest-pole coefficients and the leading oscillatory coefficient.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::fan::{ChartData, Fan};
use crate::lattice_poly::{binomial_series_pow, AlgebraicScalar, Exponent, SparsePolynomial, TruncatedSeries};
use crate::poles::{delta_lattice_points, CandidatePole, ConeEntry};
use crate::rational::{abs, is_integer, is_odd_integer, to_f64, Rational};

/// `μ(σ, α)_i = ν_i − ⟨a^i, α⟩`; may be negative.
pub fn mu(generators: &[Vec<i64>], nu: &[i64], alpha: &Exponent) -> Vec<i64> {
    generators.iter().zip(nu).map(|(a, &v)| v - alpha.dot(a)).collect()
}

/// Taylor data of `|f_σ|^{−λ}` near the chart origin: a rational series for
/// `(1 + u)^{−λ}` with `u = (f_σ − c₀)/c₀`, and the scalar unit `|c₀|^{−λ}`.
pub fn f_sigma_power_jet(chart: &ChartData, lambda: &Rational, order: u32) -> Result<(TruncatedSeries, AlgebraicScalar)> {
    let c0 = &chart.c0;
    let dim = chart.f_sigma.dim();
    let shifted = &chart.f_sigma - &SparsePolynomial::constant(dim, c0.clone());
    let u = TruncatedSeries::from_polynomial(&shifted.scale(&c0.recip()), order);
    let series = binomial_series_pow(&u, &-lambda, order)?;
    let unit = AlgebraicScalar::term(Rational::one(), abs(c0), -lambda)?;
    Ok((series, unit))
}

/// Jet coefficients `c_α = ∂^α φ(0)/α!` of the test function.
fn jet_coefficient(jet: &SparsePolynomial, alpha: &Exponent) -> Rational {
    jet.coefficient(alpha)
}

/// `Σ_α Σ_σ w(σ) ∏ 1/(l_i μ_i!) · ∂^μ |f_σ|^{−λ}(0) · c_α` with a per-cone weight.
fn deepest_sum<W>(pole: &CandidatePole, fan: &Fan, charts: &[ChartData], jet: &SparsePolynomial, weight: W) -> Result<AlgebraicScalar>
where
    W: Fn(&ConeEntry, &ChartData) -> Rational,
{
    let n = fan.dim;
    let delta = delta_lattice_points(pole, n, fan)?;
    let alphas: Vec<&Exponent> = delta
        .lattice_points
        .iter()
        .filter(|a| !jet_coefficient(jet, a).is_zero())
        .collect();
    let mut total = AlgebraicScalar::zero();
    for cone in pole.cones(n) {
        let ci = cone.maximal.ok_or_else(|| Error::internal("top-dimensional profile cone without chart"))?;
        let chart = &charts[ci];
        let w = weight(cone, chart);
        if w.is_zero() {
            continue;
        }
        let gens = &chart.cone.generators;
        let mus: Vec<(Vec<i64>, &Exponent)> = alphas
            .iter()
            .map(|a| (mu(gens, &cone.nu, a), *a))
            .filter(|(m, _)| m.iter().all(|&x| x >= 0))
            .collect();
        if mus.is_empty() {
            continue;
        }
        let order = mus.iter().map(|(m, _)| m.iter().sum::<i64>()).max().unwrap_or(0) as u32;
        let (series, unit) = f_sigma_power_jet(chart, &pole.lambda, order)?;
        let l_prod: Rational = chart
            .l_vector
            .iter()
            .map(|&l| Rational::from_integer(l.into()))
            .product();
        let mut rational_part = Rational::zero();
        for (m, alpha) in mus {
            let me = Exponent::new(m.iter().map(|&x| x as u32).collect());
            let deriv = series.jet_derivative_at_zero(&me)?;
            let fact = Rational::from_integer(me.factorial());
            rational_part += &w / (&l_prod * fact) * deriv * jet_coefficient(jet, alpha);
        }
        total = total.add(&unit.scale(&rational_part));
    }
    Ok(total)
}

/// Parity weight `∏ (1 + (−1)^{ν_i})`.
pub fn parity_weight(nu: &[i64]) -> Rational {
    if nu.iter().any(|v| v % 2 != 0) {
        Rational::zero()
    } else {
        Rational::from_integer((1i64 << nu.len()).into())
    }
}

/// Exact `a_{j,n}`: requires the pole order bound to equal the dimension and
/// `λ` not to be an odd integer.
pub fn deepest_coefficient_abs(pole: &CandidatePole, fan: &Fan, charts: &[ChartData], jet: &SparsePolynomial) -> Result<AlgebraicScalar> {
    if pole.kj != fan.dim {
        return Err(Error::NotApplicable(format!(
            "order bound {} differs from the dimension {}",
            pole.kj, fan.dim
        )));
    }
    if is_odd_integer(&pole.lambda) {
        return Err(Error::NotApplicable("λ is an odd integer".into()));
    }
    deepest_sum(pole, fan, charts, jet, |cone, _| parity_weight(&cone.nu))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignProfile {
    pub plus: Vec<Vec<i8>>,
    pub minus: Vec<Vec<i8>>,
    pub c_plus: i64,
    pub c_minus: i64,
}

/// Quadrants of the chart where `±f > 0` near the origin, weighted by `∏ ε_i^{ν_i}`.
pub fn sign_counts(chart: &ChartData, nu: &[i64]) -> Result<SignProfile> {
    let n = chart.l_vector.len();
    if n > 20 {
        return Err(Error::ResourceLimit("sign enumeration is limited to 20 variables".into()));
    }
    if chart.c0.is_zero() {
        return Err(Error::internal("chart unit vanishes at the origin"));
    }
    let s0: i64 = if chart.c0.is_positive() { 1 } else { -1 };
    let mut out = SignProfile {
        plus: vec![],
        minus: vec![],
        c_plus: 0,
        c_minus: 0,
    };
    for mask in 0u32..(1 << n) {
        let eps: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let sign_of = |pows: &[i64]| -> i64 {
            eps.iter()
                .zip(pows)
                .map(|(&e, &p)| if e < 0 && p % 2 != 0 { -1 } else { 1 })
                .product()
        };
        let s = s0 * sign_of(&chart.l_vector);
        let w = sign_of(nu);
        if s > 0 {
            out.c_plus += w;
            out.plus.push(eps);
        } else {
            out.c_minus += w;
            out.minus.push(eps);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedCoefficients {
    pub b_plus: AlgebraicScalar,
    pub b_minus: AlgebraicScalar,
    /// Whether `b±` also equal the Laurent coefficients of `∫ f±^λ φ` (non-integer `λ`).
    pub laurent_valid: bool,
}

/// `b±_{j,n}`, which equal `a±_{j,n}` when `λ` is not an integer.
pub fn deepest_coefficient_signed(pole: &CandidatePole, fan: &Fan, charts: &[ChartData], jet: &SparsePolynomial) -> Result<SignedCoefficients> {
    if pole.kj != fan.dim {
        return Err(Error::NotApplicable(format!(
            "order bound {} differs from the dimension {}",
            pole.kj, fan.dim
        )));
    }
    let counts = |cone: &ConeEntry, chart: &ChartData| sign_counts(chart, &cone.nu).expect("chart with nonzero unit");
    let b_plus = deepest_sum(pole, fan, charts, jet, |c, ch| Rational::from_integer(counts(c, ch).c_plus.into()))?;
    let b_minus = deepest_sum(pole, fan, charts, jet, |c, ch| Rational::from_integer(counts(c, ch).c_minus.into()))?;
    Ok(SignedCoefficients {
        b_plus,
        b_minus,
        laurent_valid: !is_integer(&pole.lambda),
    })
}

/// Leading oscillatory coefficient `Γ(λ)/(n−1)! (e^{iπλ/2} b⁺ + e^{−iπλ/2} b⁻)`
/// as `(re, im)`.
pub fn oscillating_leading(lambda: &Rational, n: usize, b_plus: &AlgebraicScalar, b_minus: &AlgebraicScalar) -> (f64, f64) {
    let l = to_f64(lambda);
    let fact: f64 = (1..n).map(|k| k as f64).product();
    let g = gamma(l) / fact;
    let (bp, bm) = (b_plus.to_f64(), b_minus.to_f64());
    let phase = std::f64::consts::FRAC_PI_2 * l;
    (g * phase.cos() * (bp + bm), g * phase.sin() * (bp - bm))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeepestCoefficients {
    pub j: usize,
    /// `a_{j,n}`, or the reason it is not available.
    pub a: std::result::Result<AlgebraicScalar, String>,
    pub signed: std::result::Result<SignedCoefficients, String>,
    pub c_osc: Option<(f64, f64)>,
    /// `c_osc` for integer `λ` rests on a sketched argument.
    pub integer_caveat: bool,
}

pub fn deepest_coefficients(pole: &CandidatePole, fan: &Fan, charts: &[ChartData], jet: &SparsePolynomial) -> DeepestCoefficients {
    let a = deepest_coefficient_abs(pole, fan, charts, jet).map_err(|e| e.to_string());
    let signed = deepest_coefficient_signed(pole, fan, charts, jet).map_err(|e| e.to_string());
    let c_osc = signed
        .as_ref()
        .ok()
        .map(|s| oscillating_leading(&pole.lambda, fan.dim, &s.b_plus, &s.b_minus));
    DeepestCoefficients {
        j: pole.index,
        a,
        signed,
        c_osc,
        integer_caveat: pole.is_integer,
    }
}

/// Per-chart `(c₊, c₋)` keyed by maximal cone, for the report.
pub fn sign_table(pole: &CandidatePole, charts: &[ChartData]) -> BTreeMap<usize, (i64, i64)> {
    pole.cones(pole.dim())
        .iter()
        .filter_map(|c| {
            let ci = c.maximal?;
            let s = sign_counts(&charts[ci], &c.nu).ok()?;
            Some((ci, (s.c_plus, s.c_minus)))
        })
        .collect()
}
