//! Meromorphic continuation of `∫ |f|^λ φ dx` by an exact monomial change of
//! variables on each chart of a smooth fan.
//!
//! The unit box `(0,1]^n` is the disjoint union of the images of `(0,1]^n` under
//! the chart maps `x_j = ∏_i y_i^{a^i_j}`, one per maximal cone. On each chart the
//! integrand is `∏ y_i^{l_i λ + m_i} · h(y)` with `h` regular near the coordinate
//! hyperplanes. Every singular variable is split at `δ`; on `[0, δ]` the plateau
//! cutoff is identically 1, so `h` is expanded in a power series and the
//! integrals `∫_0^δ y^{s+k} dy` are taken in closed form. The remaining
//! variables are integrated numerically.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice_poly::{Exponent, SparsePolynomial};
use crate::newton::NewtonPolyhedron;
use crate::rational::{to_f64, Rational};

use super::plateau::{CutoffShape, PlateauTestFunction};
use super::quadrature::{integrate_box, QuadOptions};
use super::series::{multiply_sparse, normalized_power, IndexTable};

/// Which part of the integrand is kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignMode {
    /// `|f|^λ`.
    Abs,
    /// `f_+^λ`, supported where `f > 0`.
    Plus,
    /// `f_-^λ`, supported where `f < 0`.
    Minus,
}

impl SignMode {
    fn keeps(self, sign: f64) -> bool {
        match self {
            SignMode::Abs => true,
            SignMode::Plus => sign > 0.0,
            SignMode::Minus => sign < 0.0,
        }
    }
}

type FloatPoly = Vec<(Vec<u32>, f64)>;

/// One chart and sign quadrant: the integrand `∏ y_i^{slope_i λ + shift_i} |unit(y)|^λ jet(y) χ(x(y))`
/// over `y ∈ (0,1]^n`, where `x_j = sign_j ∏_i y_i^{generators[i][j]}`.
#[derive(Clone, Debug)]
pub struct ChartPiece {
    pub slopes: Vec<f64>,
    pub shifts: Vec<f64>,
    pub unit: FloatPoly,
    pub jet: FloatPoly,
    pub generators: Vec<Vec<i64>>,
    pub signs: Vec<f64>,
}

impl ChartPiece {
    fn dim(&self) -> usize {
        self.slopes.len()
    }

    /// A grid point of the chart cube inside the support of `φ` where the unit
    /// fails to keep the sign it has at the origin.
    fn unit_zero(&self, phi: &PlateauTestFunction) -> Option<Vec<f64>> {
        let n = self.dim();
        let steps = match n {
            1 => 256,
            2 => 64,
            3 => 16,
            _ => 8,
        };
        let base = eval_terms(&self.unit, &vec![0.0; n]).signum();
        let mut idx = vec![0usize; n];
        loop {
            let y: Vec<f64> = idx.iter().map(|&i| i as f64 / steps as f64).collect();
            if phi.cutoff(&self.point(&y)) > 0.0 && eval_terms(&self.unit, &y) * base <= 0.0 {
                return Some(y);
            }
            let mut k = 0;
            loop {
                if k == n {
                    return None;
                }
                idx[k] += 1;
                if idx[k] <= steps {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    fn point(&self, y: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|j| {
                self.signs[j]
                    * self
                        .generators
                        .iter()
                        .zip(y)
                        .map(|(a, &v)| if a[j] == 0 { 1.0 } else { v.powi(a[j] as i32) })
                        .product::<f64>()
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ContinuationOptions {
    /// Split point of the singular variables, as a fraction of the largest admissible value.
    pub split_fraction: f64,
    pub quad: QuadOptions,
    /// Required relative size of the highest-degree series terms.
    pub series_tol: f64,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        ContinuationOptions {
            split_fraction: 0.5,
            quad: QuadOptions {
                abs_tol: 1e-13,
                rel_tol: 1e-11,
                initial_panels: 4,
                max_panels: 4000,
            },
            series_tol: 1e-13,
        }
    }
}

/// The continued zeta function as a sum of chart pieces.
#[derive(Clone, Debug)]
pub struct ContinuedZeta {
    pub pieces: Vec<ChartPiece>,
    pub phi: PlateauTestFunction,
    pub mode: SignMode,
    pub options: ContinuationOptions,
    delta: f64,
}

fn sign_vectors(n: usize) -> Vec<Vec<i64>> {
    (0..1usize << n)
        .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect())
        .collect()
}

fn flip_signs(p: &SparsePolynomial, signs: &[i64]) -> Result<SparsePolynomial> {
    SparsePolynomial::from_terms(
        p.dim(),
        p.terms().map(|(e, c)| {
            let odd = e.entries().iter().zip(signs).filter(|(&k, &s)| s < 0 && k % 2 == 1).count();
            (e.clone(), if odd % 2 == 1 { -c.clone() } else { c.clone() })
        }),
    )
}

fn float_terms(p: &SparsePolynomial) -> FloatPoly {
    p.to_f64_terms()
}

impl ContinuedZeta {
    fn build(pieces: Vec<ChartPiece>, phi: PlateauTestFunction, mode: SignMode, options: ContinuationOptions) -> Result<Self> {
        let n = phi.dim();
        if phi.outer() > 1.0 {
            return Err(Error::Unsupported("the plateau must be supported in the unit box".into()));
        }
        let limit = match phi.shape {
            CutoffShape::Radial => phi.inner() / (n as f64).sqrt(),
            CutoffShape::Product => phi.inner(),
        };
        let delta = (limit * options.split_fraction).min(0.5);
        Ok(ContinuedZeta {
            pieces,
            phi,
            mode,
            options,
            delta,
        })
    }

    /// Pieces for `f` over the charts of the smooth fan `fan`, four sign
    /// quadrants per chart in dimension two.
    pub fn for_polynomial(
        f: &SparsePolynomial,
        poly: &NewtonPolyhedron,
        fan: &Fan,
        phi: &PlateauTestFunction,
        mode: SignMode,
        options: ContinuationOptions,
    ) -> Result<Self> {
        let n = f.dim();
        if phi.dim() != n {
            return Err(Error::Dimension {
                expected: n,
                got: phi.dim(),
            });
        }
        let mut pieces = Vec::new();
        for cone in fan.maximal_cones() {
            let gens = cone.generators;
            let l: Vec<i64> = gens.iter().map(|a| poly.support_min(a)).collect::<Result<_>>()?;
            let exceptional = Exponent::new(l.iter().map(|&v| v as u32).collect());
            for signs in sign_vectors(n) {
                let unit = flip_signs(f, &signs)?
                    .monomial_pullback(&gens)?
                    .divide_by_monomial(&exceptional)?;
                let jet = flip_signs(&phi.jet, &signs)?.monomial_pullback(&gens)?;
                pieces.push(ChartPiece {
                    slopes: l.iter().map(|&v| v as f64).collect(),
                    shifts: gens.iter().map(|a| (a.iter().sum::<i64>() - 1) as f64).collect(),
                    unit: float_terms(&unit),
                    jet: float_terms(&jet),
                    generators: gens.clone(),
                    signs: signs.iter().map(|&s| s as f64).collect(),
                });
            }
        }
        for piece in &pieces {
            if let Some(y) = piece.unit_zero(phi) {
                return Err(Error::Unsupported(format!(
                    "the zero set of f crosses a chart inside the support of φ, at chart point {y:?}"
                )));
            }
        }
        Self::build(pieces, phi.clone(), mode, options)
    }

    /// Pieces for the monomial weight `∏ |x_i|^{slope_i λ + shift_i}`; with
    /// `positive_only` the integral runs over the positive orthant only.
    pub fn for_monomial_weight(
        slopes: &[Rational],
        shifts: &[Rational],
        positive_only: bool,
        phi: &PlateauTestFunction,
        options: ContinuationOptions,
    ) -> Result<Self> {
        let n = slopes.len();
        if shifts.len() != n || phi.dim() != n {
            return Err(Error::Dimension {
                expected: n,
                got: shifts.len().min(phi.dim()),
            });
        }
        let identity: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        let quadrants = if positive_only { vec![vec![1; n]] } else { sign_vectors(n) };
        let pieces = quadrants
            .into_iter()
            .map(|signs| {
                Ok(ChartPiece {
                    slopes: slopes.iter().map(to_f64).collect(),
                    shifts: shifts.iter().map(to_f64).collect(),
                    unit: vec![(vec![0; n], 1.0)],
                    jet: float_terms(&flip_signs(&phi.jet, &signs)?),
                    generators: identity.clone(),
                    signs: signs.iter().map(|&s| s as f64).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::build(pieces, phi.clone(), SignMode::Abs, options)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Candidate poles visible from the chart exponents: `λ = (m_i + 1 + k)/l_i`
    /// up to `max`, each with the largest number of coincident variables in one piece.
    pub fn exponent_ladder(&self, max: f64) -> Vec<(f64, usize)> {
        let mut found: BTreeMap<i64, (f64, usize)> = BTreeMap::new();
        for piece in &self.pieces {
            let mut local: BTreeMap<i64, usize> = BTreeMap::new();
            for (l, m) in piece.slopes.iter().zip(&piece.shifts) {
                if *l <= 0.0 {
                    continue;
                }
                let mut k = 0.0;
                while (m + 1.0 + k) / l <= max + 1e-12 {
                    let v = (m + 1.0 + k) / l;
                    *local.entry((v * 1e9).round() as i64).or_default() += 1;
                    k += 1.0;
                }
            }
            for (key, count) in local {
                let e = found.entry(key).or_insert((key as f64 / 1e9, 0));
                e.1 = e.1.max(count);
            }
        }
        found.into_values().collect()
    }

    /// Value of the continued integral at real `lambda`, which must not be a pole.
    pub fn eval(&self, lambda: f64) -> Result<f64> {
        let mut total = 0.0;
        for piece in &self.pieces {
            total += self.eval_piece(piece, lambda)?;
        }
        Ok(total)
    }

    fn eval_piece(&self, piece: &ChartPiece, lambda: f64) -> Result<f64> {
        let n = piece.dim();
        let s: Vec<f64> = piece.slopes.iter().zip(&piece.shifts).map(|(l, m)| l * lambda + m).collect();
        let singular: Vec<usize> = (0..n).filter(|&i| piece.slopes[i] > 0.0).collect();
        let mut total = 0.0;
        for mask in 0..1usize << singular.len() {
            let split: Vec<usize> = singular
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &i)| i)
                .collect();
            let rest: Vec<usize> = (0..n).filter(|i| !split.contains(i)).collect();
            let lo: Vec<f64> = rest.iter().map(|i| if singular.contains(i) { self.delta } else { 0.0 }).collect();
            let hi = vec![1.0; rest.len()];
            let table = IndexTable::new(split.len(), series_order(split.len()));
            let integrand = |yr: &[f64]| -> Result<f64> {
                let mut y = vec![0.0; n];
                for (&i, &v) in rest.iter().zip(yr) {
                    y[i] = v;
                }
                let weight: f64 = rest.iter().map(|&i| y[i].powf(s[i])).product();
                if split.is_empty() {
                    Ok(weight * self.regular_value(piece, &y, lambda))
                } else {
                    Ok(weight * self.expanded_value(piece, &y, &split, &table, &s, lambda)?)
                }
            };
            let value = if rest.is_empty() {
                integrand(&[])?
            } else {
                integrate_box(&integrand, &lo, &hi, &self.options.quad)?.value
            };
            total += value;
        }
        Ok(total)
    }

    fn regular_value(&self, piece: &ChartPiece, y: &[f64], lambda: f64) -> f64 {
        let u = eval_terms(&piece.unit, y);
        if !self.mode.keeps(u) {
            return 0.0;
        }
        let x = piece.point(y);
        let c = self.phi.cutoff(&x);
        if c == 0.0 {
            return 0.0;
        }
        u.abs().powf(lambda) * eval_terms(&piece.jet, y) * c
    }

    /// `∫_{[0,δ]^split} ∏ y_i^{s_i} h(y) dy_split` with the other variables fixed.
    fn expanded_value(
        &self,
        piece: &ChartPiece,
        y: &[f64],
        split: &[usize],
        table: &IndexTable,
        s: &[f64],
        lambda: f64,
    ) -> Result<f64> {
        let cut = self.split_cutoff(piece, y, split)?;
        if cut == 0.0 {
            return Ok(0.0);
        }
        let unit = restrict(&piece.unit, y, split);
        let c0: f64 = unit.iter().filter(|(e, _)| e.iter().all(|&k| k == 0)).map(|(_, c)| c).sum();
        if c0 == 0.0 || !c0.is_finite() {
            return Err(Error::Unsupported(
                "the unit factor vanishes on an exceptional divisor".into(),
            ));
        }
        if !self.mode.keeps(c0) {
            return Ok(0.0);
        }
        let g = normalized_power(table, &unit, lambda);
        let h = multiply_sparse(table, &g, &restrict(&piece.jet, y, split));
        let mut sum = 0.0;
        let mut magnitude = 0.0;
        let mut top = 0.0;
        for (gamma, coef) in table.list.iter().zip(&h) {
            if *coef == 0.0 {
                continue;
            }
            let mut term = *coef;
            for (&i, &k) in split.iter().zip(gamma) {
                let e = s[i] + k as f64 + 1.0;
                term *= self.delta.powf(e) / e;
            }
            sum += term;
            magnitude += term.abs();
            if gamma.iter().sum::<u32>() + 2 >= table.order {
                top += term.abs();
            }
        }
        if top > self.options.series_tol * magnitude.max(f64::MIN_POSITIVE) {
            return Err(Error::Quadrature {
                achieved: top,
                requested: self.options.series_tol * magnitude,
            });
        }
        Ok(cut * c0.abs().powf(lambda) * sum)
    }

    /// The cutoff on a box where the `split` variables lie in `[0, δ]`. Coordinates
    /// that depend on a split variable are at most `δ` there, inside the plateau.
    fn split_cutoff(&self, piece: &ChartPiece, y: &[f64], split: &[usize]) -> Result<f64> {
        let n = piece.dim();
        let small: Vec<bool> = (0..n)
            .map(|j| split.iter().any(|&i| piece.generators[i][j] > 0))
            .collect();
        match self.phi.shape {
            CutoffShape::Radial => {
                if small.iter().all(|&b| b) {
                    Ok(1.0)
                } else {
                    Err(Error::Unsupported(
                        "a radial cutoff needs every coordinate to shrink near the divisor".into(),
                    ))
                }
            }
            CutoffShape::Product => {
                let mut yy = y.to_vec();
                for &i in split {
                    yy[i] = 1.0;
                }
                let x = piece.point(&yy);
                Ok((0..n).filter(|&j| !small[j]).map(|j| self.phi.profile(x[j].abs())).product())
            }
        }
    }
}

fn series_order(dim: usize) -> u32 {
    match dim {
        0 => 0,
        1 => 60,
        2 => 36,
        _ => 16,
    }
}

fn eval_terms(p: &FloatPoly, y: &[f64]) -> f64 {
    p.iter()
        .map(|(e, c)| c * e.iter().zip(y).map(|(&k, &v)| v.powi(k as i32)).product::<f64>())
        .sum()
}

/// Substitutes the non-split variables, leaving a polynomial in the split ones.
fn restrict(p: &FloatPoly, y: &[f64], split: &[usize]) -> FloatPoly {
    let mut out: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
    for (e, c) in p {
        let mut v = *c;
        for (i, &k) in e.iter().enumerate() {
            if k > 0 && !split.contains(&i) {
                v *= y[i].powi(k as i32);
            }
        }
        *out.entry(split.iter().map(|&i| e[i]).collect()).or_default() += v;
    }
    out.into_iter().collect()
}
