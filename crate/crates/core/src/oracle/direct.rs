//! Direct quadrature in the original coordinates.

use crate::error::{Error, Result};
use crate::lattice_poly::SparsePolynomial;

use super::continuation::SignMode;
use super::plateau::PlateauTestFunction;
use super::quadrature::{integrate, integrate_box, QuadOptions};

/// `∫ |f|^λ φ`, `∫ f_+^λ φ` or `∫ f_-^λ φ` over the support of `φ`, for `λ > 0`.
pub fn zeta_quadrature(
    f: &SparsePolynomial,
    phi: &PlateauTestFunction,
    lambda: f64,
    mode: SignMode,
    opts: &QuadOptions,
) -> Result<f64> {
    if lambda <= 0.0 {
        return Err(Error::input("direct quadrature needs λ > 0; use the continued integral"));
    }
    let n = f.dim();
    let r = phi.outer();
    let terms = f.to_f64_terms();
    let integrand = |x: &[f64]| -> Result<f64> {
        let p = phi.eval(x);
        if p == 0.0 {
            return Ok(0.0);
        }
        let v = eval(&terms, x);
        let kept = match mode {
            SignMode::Abs => v.abs(),
            SignMode::Plus => v.max(0.0),
            SignMode::Minus => (-v).max(0.0),
        };
        Ok(if kept == 0.0 { 0.0 } else { kept.powf(lambda) * p })
    };
    let o = QuadOptions {
        initial_panels: opts.initial_panels.max(8),
        ..*opts
    };
    Ok(integrate_box(&integrand, &vec![-r; n], &vec![r; n], &o)?.value)
}

/// `∫ e^{itf(x)} φ(x) dx` as `(re, im)`.
pub fn oscillatory_integral(f: &SparsePolynomial, phi: &PlateauTestFunction, t: f64, opts: &QuadOptions) -> Result<(f64, f64)> {
    let n = f.dim();
    let r = phi.outer();
    let terms = f.to_f64_terms();
    let grad: Vec<_> = (0..n).map(|i| f.partial(i).to_f64_terms()).collect();
    // Enough initial panels to resolve the fastest oscillation on the support.
    let samples = 64;
    let mut slope: f64 = 0.0;
    for k in 0..=samples {
        let v = -r + 2.0 * r * k as f64 / samples as f64;
        let x = vec![v; n];
        let g: f64 = grad.iter().map(|d| eval(d, &x).powi(2)).sum::<f64>().sqrt();
        slope = slope.max(g);
    }
    let panels = ((t * slope * 2.0 * r / std::f64::consts::PI).ceil() as usize).clamp(8, 4000);
    let o = QuadOptions {
        initial_panels: panels,
        max_panels: opts.max_panels.max(4 * panels),
        ..*opts
    };
    let part = |phase: fn(f64) -> f64| -> Result<f64> {
        let g = |x: &[f64]| -> Result<f64> {
            let p = phi.eval(x);
            Ok(if p == 0.0 { 0.0 } else { phase(t * eval(&terms, x)) * p })
        };
        if n == 1 {
            integrate(|x| g(&[x]), -r, r, &o).map(|e| e.value)
        } else {
            integrate_box(&g, &vec![-r; n], &vec![r; n], &o).map(|e| e.value)
        }
    };
    Ok((part(f64::cos)?, part(f64::sin)?))
}

fn eval(terms: &[(Vec<u32>, f64)], x: &[f64]) -> f64 {
    terms
        .iter()
        .map(|(e, c)| c * e.iter().zip(x).map(|(&k, &v)| v.powi(k as i32)).product::<f64>())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn phi(n: usize) -> PlateauTestFunction {
        PlateauTestFunction::new(SparsePolynomial::constant(n, rat(1, 1)), rat(1, 2), rat(1, 1)).unwrap()
    }

    #[test]
    fn cube_splits_into_signed_parts() {
        let f = SparsePolynomial::from_int_terms(1, &[(&[3], 1, 1)]).unwrap();
        let o = QuadOptions::default();
        let a = zeta_quadrature(&f, &phi(1), 1.0, SignMode::Abs, &o).unwrap();
        let p = zeta_quadrature(&f, &phi(1), 1.0, SignMode::Plus, &o).unwrap();
        let m = zeta_quadrature(&f, &phi(1), 1.0, SignMode::Minus, &o).unwrap();
        assert!((a - p - m).abs() < 1e-10);
        assert!((p - m).abs() < 1e-10);
    }

    #[test]
    fn zero_jet_gives_zero() {
        let f = SparsePolynomial::from_int_terms(1, &[(&[2], 1, 1)]).unwrap();
        let zero = PlateauTestFunction::new(SparsePolynomial::zero(1), rat(1, 2), rat(1, 1)).unwrap();
        assert_eq!(zeta_quadrature(&f, &zero, 1.0, SignMode::Abs, &QuadOptions::default()).unwrap(), 0.0);
        assert_eq!(oscillatory_integral(&f, &zero, 10.0, &QuadOptions::default()).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn fresnel_limit() {
        let f = SparsePolynomial::from_int_terms(1, &[(&[2], 1, 1)]).unwrap();
        let t = 200.0;
        let (re, im) = oscillatory_integral(&f, &phi(1), t, &QuadOptions::default()).unwrap();
        let modulus = (re * re + im * im).sqrt() * t.sqrt();
        assert!((modulus - std::f64::consts::PI.sqrt()).abs() < 1e-3);
    }
}
