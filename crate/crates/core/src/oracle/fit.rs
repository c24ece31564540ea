//! Least-squares fits of Laurent and oscillatory expansions to sampled values.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::continuation::ContinuedZeta;

#[derive(Clone, Debug)]
pub struct FitOptions {
    /// Offsets `t` from the pole; samples are taken at `λ = -λ_j + t`.
    pub offsets: Vec<f64>,
    /// Also sample at `-t`.
    pub symmetric: bool,
    /// Degree of the polynomial modelling the regular part.
    pub regular_degree: usize,
    /// Neighbouring candidates closer than this many times the largest offset
    /// enter the model with their own principal parts.
    pub neighbor_reach: f64,
}

impl FitOptions {
    /// `count` log-spaced offsets in `[lo, hi]`.
    pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Self {
        let offsets = (0..count)
            .map(|i| lo * (hi / lo).powf(i as f64 / (count.max(2) - 1) as f64))
            .collect();
        FitOptions {
            offsets,
            symmetric: false,
            regular_degree: 3,
            neighbor_reach: 3.0,
        }
    }

    pub fn symmetric(mut self) -> Self {
        self.symmetric = true;
        self
    }

    /// The same grid with every offset halved.
    pub fn halved(&self) -> Self {
        FitOptions {
            offsets: self.offsets.iter().map(|t| t / 2.0).collect(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentFit {
    pub lambda: f64,
    /// `a_1, …, a_kMax`: coefficients of `(λ+λ_j)^{-k}`.
    pub coefficients: Vec<f64>,
    /// Standard errors from the residual variance.
    pub errors: Vec<f64>,
    /// Root-mean-square residual relative to the root-mean-square sample.
    pub residual: f64,
    pub condition: f64,
    /// Neighbouring candidates `(λ, order)` included in the model.
    pub neighbors: Vec<(f64, usize)>,
}

impl LaurentFit {
    pub fn leading(&self) -> f64 {
        *self.coefficients.last().expect("at least one coefficient")
    }
}

struct LinearFit {
    coefficients: Vec<f64>,
    errors: Vec<f64>,
    residual: f64,
    residual_norm: f64,
    data_norm: f64,
    condition: f64,
}

/// Least squares with column equilibration, solved by SVD.
fn least_squares(rows: &[Vec<f64>], values: &[f64]) -> Result<LinearFit> {
    let m = rows.len();
    let p = rows.first().map_or(0, Vec::len);
    if m <= p {
        return Err(Error::input(format!("{m} samples cannot determine {p} coefficients")));
    }
    let mut a = DMatrix::from_fn(m, p, |i, j| rows[i][j]);
    let scale: Vec<f64> = (0..p).map(|j| a.column(j).norm().max(f64::MIN_POSITIVE)).collect();
    for (j, s) in scale.iter().enumerate() {
        a.column_mut(j).scale_mut(1.0 / s);
    }
    let b = DVector::from_column_slice(values);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let x = svd
        .solve(&b, smax * 1e-14)
        .map_err(|e| Error::internal(format!("least squares failed: {e}")))?;
    let r = &b - &a * &x;
    let dof = (m - p) as f64;
    let sigma2 = r.norm_squared() / dof;
    // Covariance of the scaled solution: V Σ^{-2} Vᵀ σ².
    let vt = svd.v_t.as_ref().expect("requested V");
    let errors = (0..p)
        .map(|j| {
            let var: f64 = (0..svd.singular_values.len())
                .map(|k| (vt[(k, j)] / svd.singular_values[k]).powi(2))
                .sum();
            (var * sigma2).sqrt() / scale[j]
        })
        .collect();
    Ok(LinearFit {
        coefficients: x.iter().zip(&scale).map(|(v, s)| v / s).collect(),
        errors,
        residual: r.norm() / b.norm().max(f64::MIN_POSITIVE),
        residual_norm: r.norm(),
        data_norm: b.norm(),
        condition: smax / smin.max(f64::MIN_POSITIVE),
    })
}

/// Fits `Z(-λ_j + t) ≈ Σ_k a_k t^{-k} + (neighbour principal parts) + Σ_d c_d t^d`.
pub fn laurent_fit(zeta: &ContinuedZeta, lambda_j: f64, k_max: usize, opts: &FitOptions) -> Result<LaurentFit> {
    if k_max == 0 {
        return Err(Error::input("k_max must be positive"));
    }
    let mut ts: Vec<f64> = opts.offsets.clone();
    if opts.symmetric {
        ts.extend(opts.offsets.iter().map(|t| -t));
    }
    let reach = opts.neighbor_reach * opts.offsets.iter().cloned().fold(0.0, f64::max);
    let neighbors: Vec<(f64, usize)> = zeta
        .exponent_ladder(lambda_j + reach)
        .into_iter()
        .filter(|(mu, _)| (mu - lambda_j).abs() > 1e-9 && (mu - lambda_j).abs() <= reach)
        .collect();
    let values: Vec<f64> = ts
        .par_iter()
        .map(|&t| zeta.eval(-lambda_j + t))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<f64>> = ts
        .iter()
        .map(|&t| {
            let mut row: Vec<f64> = (1..=k_max).map(|k| t.powi(-(k as i32))).collect();
            for &(mu, order) in &neighbors {
                // The neighbour pole sits at t = λ_j − μ.
                let d = t - (lambda_j - mu);
                row.extend((1..=order).map(|k| d.powi(-(k as i32))));
            }
            row.extend((0..=opts.regular_degree).map(|d| t.powi(d as i32)));
            row
        })
        .collect();
    let fit = least_squares(&rows, &values)?;
    Ok(LaurentFit {
        lambda: lambda_j,
        coefficients: fit.coefficients[..k_max].to_vec(),
        errors: fit.errors[..k_max].to_vec(),
        residual: fit.residual,
        condition: fit.condition,
        neighbors,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OscillatoryFit {
    /// Leading coefficient `(re, im)`.
    pub leading: (f64, f64),
    /// All coefficients in model order.
    pub coefficients: Vec<(f64, f64)>,
    pub residual: f64,
}

/// Fits `I(t) ≈ Σ c t^{-λ} (log t)^{k-1}` over the model terms `(λ, k)`; the
/// first term is the leading one.
pub fn oscillatory_fit(samples: &[(f64, (f64, f64))], model: &[(f64, usize)]) -> Result<OscillatoryFit> {
    if model.is_empty() {
        return Err(Error::input("empty oscillatory model"));
    }
    let rows: Vec<Vec<f64>> = samples
        .iter()
        .map(|&(t, _)| {
            model
                .iter()
                .map(|&(lam, k)| t.powf(-lam) * t.ln().powi(k as i32 - 1))
                .collect()
        })
        .collect();
    let re: Vec<f64> = samples.iter().map(|s| s.1 .0).collect();
    let im: Vec<f64> = samples.iter().map(|s| s.1 .1).collect();
    let fr = least_squares(&rows, &re)?;
    let fi = least_squares(&rows, &im)?;
    let coefficients: Vec<(f64, f64)> = fr.coefficients.iter().zip(&fi.coefficients).map(|(&a, &b)| (a, b)).collect();
    Ok(OscillatoryFit {
        leading: coefficients[0],
        coefficients,
        residual: fr.residual_norm.hypot(fi.residual_norm) / fr.data_norm.hypot(fi.data_norm).max(f64::MIN_POSITIVE),
    })
}

/// Oscillatory model: each candidate exponent with every log power up to its order.
pub fn oscillatory_model(terms: &[(f64, usize)]) -> Vec<(f64, usize)> {
    terms
        .iter()
        .flat_map(|&(lam, order)| (1..=order).rev().map(move |k| (lam, k)))
        .collect()
}
