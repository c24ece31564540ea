//! Real Newton non-degeneracy: no γ-part has a critical zero on the torus `(R∖{0})ⁿ`.

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::neldermead::NelderMead;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::lattice_poly::{Exponent, SparsePolynomial};
use crate::newton::{gamma_part, Face, NewtonPolyhedron};
use crate::rational::{to_f64, Rational};
use crate::univariate::UniPoly;

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Exact(Vec<Rational>),
    Approximate(Vec<f64>),
}

impl Witness {
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Witness::Exact(v) => v.iter().map(to_f64).collect(),
            Witness::Approximate(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FaceStatus {
    /// Decided exactly: no critical zero on the torus.
    Proven,
    /// Randomized search found nothing; carries the smallest normalized residual.
    NoWitnessFound { trials: usize, best_residual: f64 },
    Degenerate(Witness),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceVerdict {
    pub face: usize,
    pub dim: usize,
    pub status: FaceStatus,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Proven,
    ProbablyNondegenerate { trials: usize },
    Degenerate { face: usize, witness: Witness },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NondegeneracyVerdict {
    pub status: Status,
    pub faces: Vec<FaceVerdict>,
}

impl NondegeneracyVerdict {
    pub fn is_degenerate(&self) -> bool {
        matches!(self.status, Status::Degenerate { .. })
    }
}

/// Edge test. On an edge with primitive direction `d` from vertex `v`, the γ-part
/// is `x^v · P(x^d)`; it has a critical torus zero iff `P` has a repeated
/// nonzero real root, and `x^d` takes every nonzero real value because some
/// entry of `d` is odd.
fn check_edge(g: &SparsePolynomial, v: &Exponent, w: &Exponent) -> FaceStatus {
    let diff: Vec<i64> = w.as_i64().iter().zip(v.as_i64()).map(|(a, b)| a - b).collect();
    let step = diff.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
    let d: Vec<i64> = diff.iter().map(|x| x / step).collect();
    let coeffs: Vec<Rational> = (0..=step)
        .map(|k| {
            let e: Vec<u32> = v.as_i64().iter().zip(&d).map(|(a, b)| (a + k * b) as u32).collect();
            g.coefficient(&Exponent::new(e))
        })
        .collect();
    let p = UniPoly::new(coeffs);
    let common = p.gcd(&p.derivative());
    let big = common.root_bound();
    if common.degree().unwrap_or(0) == 0 || common.count_roots(&-big.clone(), &big) == 0 {
        return FaceStatus::Proven;
    }
    let axis = d.iter().rposition(|x| x % 2 != 0).expect("primitive direction has an odd entry");
    let n = v.dim();
    if common.degree() == Some(1) {
        let c = common.coeffs();
        let z0 = -&c[0] / &c[1];
        // x_axis^{d_axis} = z0 with odd d_axis: exact when z0 is ±1, the usual case
        let mag = z0.abs();
        if mag.is_one() {
            let mut x = vec![Rational::one(); n];
            x[axis] = z0;
            return FaceStatus::Degenerate(Witness::Exact(x));
        }
        let mut x = vec![1.0; n];
        x[axis] = to_f64(&z0).signum() * to_f64(&mag).powf(1.0 / d[axis] as f64);
        return FaceStatus::Degenerate(Witness::Approximate(x));
    }
    let z0 = common.approximate_roots()[0];
    let mut x = vec![1.0; n];
    x[axis] = z0.signum() * z0.abs().powf(1.0 / d[axis] as f64);
    FaceStatus::Degenerate(Witness::Approximate(x))
}

/// Normalized critical residual `(g² + Σ (x_i ∂_i g)²) / (Σ |a_α x^α|)²` in log
/// coordinates `x_i = s_i e^{u_i}`.
#[derive(Clone)]
struct Residual {
    terms: Vec<(Vec<f64>, f64)>,
    signs: Vec<f64>,
}

impl Residual {
    fn point(&self, u: &[f64]) -> Vec<f64> {
        u.iter().zip(&self.signs).map(|(ui, s)| s * ui.exp()).collect()
    }

    fn value(&self, u: &[f64]) -> f64 {
        let n = u.len();
        let x = self.point(u);
        let mut g = 0.0;
        let mut euler = vec![0.0; n];
        let mut mass = 0.0;
        for (e, c) in &self.terms {
            let m = c * e.iter().zip(&x).map(|(k, xi)| xi.powi(*k as i32)).product::<f64>();
            g += m;
            mass += m.abs();
            for i in 0..n {
                euler[i] += e[i] * m;
            }
        }
        if mass == 0.0 || !mass.is_finite() {
            return f64::MAX;
        }
        (g * g + euler.iter().map(|t| t * t).sum::<f64>()) / (mass * mass)
    }
}

impl CostFunction for Residual {
    type Param = Vec<f64>;
    type Output = f64;
    fn cost(&self, u: &Self::Param) -> Result<f64, argmin::core::Error> {
        if u.iter().any(|x| x.abs() > 40.0) {
            return Ok(f64::MAX);
        }
        Ok(self.value(u))
    }
}

const DEGENERATE_RESIDUAL: f64 = 1e-18;

fn search_face(g: &SparsePolynomial, trials: usize, seed: u64, face_index: usize) -> FaceStatus {
    let n = g.dim();
    let terms: Vec<(Vec<f64>, f64)> = g
        .to_f64_terms()
        .into_iter()
        .map(|(e, c)| (e.into_iter().map(f64::from).collect(), c))
        .collect();
    let results: Vec<(f64, Vec<f64>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((face_index as u64) << 32) | t as u64);
            let signs: Vec<f64> = (0..n).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect();
            let start: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let mut simplex = vec![start.clone()];
            for i in 0..n {
                let mut p = start.clone();
                p[i] += 0.5;
                simplex.push(p);
            }
            let problem = Residual { terms: terms.clone(), signs };
            let point_of = |u: &[f64]| problem.point(u);
            let fallback = (f64::MAX, point_of(&start));
            let solver = NelderMead::new(simplex)
                .with_sd_tolerance(1e-24)
                .expect("valid tolerance");
            Executor::new(problem.clone(), solver)
                .configure(|s| s.max_iters(3000))
                .run()
                .ok()
                .and_then(|r| {
                    let st = r.state();
                    st.get_best_param().map(|p| (st.get_best_cost(), point_of(p)))
                })
                .unwrap_or(fallback)
        })
        .collect();
    // reduction in trial order keeps the verdict independent of scheduling
    let mut best_residual = f64::MAX;
    for (cost, x) in results {
        if cost < DEGENERATE_RESIDUAL {
            return FaceStatus::Degenerate(Witness::Approximate(x));
        }
        best_residual = best_residual.min(cost);
    }
    FaceStatus::NoWitnessFound { trials, best_residual }
}

pub fn check_nondegenerate(f: &SparsePolynomial, poly: &NewtonPolyhedron, trials: usize, seed: u64) -> NondegeneracyVerdict {
    let mut faces = Vec::new();
    for (fi, face) in poly.compact_faces.iter().enumerate() {
        let status = face_status(f, poly, face, fi, trials, seed);
        faces.push(FaceVerdict {
            face: fi,
            dim: face.dim,
            status,
        });
    }
    let status = if let Some(fv) = faces.iter().find(|fv| matches!(fv.status, FaceStatus::Degenerate(_))) {
        let FaceStatus::Degenerate(w) = &fv.status else { unreachable!() };
        Status::Degenerate {
            face: fv.face,
            witness: w.clone(),
        }
    } else if faces.iter().any(|fv| matches!(fv.status, FaceStatus::NoWitnessFound { .. })) {
        Status::ProbablyNondegenerate { trials }
    } else {
        Status::Proven
    };
    NondegeneracyVerdict { status, faces }
}

fn face_status(f: &SparsePolynomial, poly: &NewtonPolyhedron, face: &Face, fi: usize, trials: usize, seed: u64) -> FaceStatus {
    let g = gamma_part(f, poly, face).expect("face of this polyhedron");
    match face.dim {
        // a monomial does not vanish on the torus
        0 => FaceStatus::Proven,
        1 => {
            let vs = poly.face_vertices(face);
            check_edge(&g, vs[0], vs[1])
        }
        _ => search_face(&g, trials, seed, fi),
    }
}

/// Coarse scan for singular points of `{f = 0}` near the origin, other than the
/// origin itself. Returns a suspicious point if one is found; only ever a warning.
pub fn scan_isolated_singularity(f: &SparsePolynomial, radius: f64, steps: usize) -> Option<Vec<f64>> {
    let n = f.dim();
    if n > 3 {
        return None;
    }
    let grads: Vec<SparsePolynomial> = (0..n).map(|i| f.partial(i)).collect();
    let h = 2.0 * radius / steps as f64;
    let total = (steps + 1).pow(n as u32);
    let mass = |x: &[f64]| -> f64 {
        f.terms()
            .map(|(e, c)| {
                (to_f64(c) * e.entries().iter().zip(x).map(|(&k, xi)| xi.powi(k as i32)).product::<f64>()).abs()
            })
            .sum()
    };
    for idx in 0..total {
        let mut k = idx;
        let x: Vec<f64> = (0..n)
            .map(|_| {
                let c = k % (steps + 1);
                k /= steps + 1;
                -radius + h * c as f64
            })
            .collect();
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r < radius * 0.25 || r > radius {
            continue;
        }
        let m = mass(&x);
        if m == 0.0 {
            continue;
        }
        let fv = f.eval_f64(&x) / m;
        let gv: f64 = grads.iter().map(|g| (g.eval_f64(&x) * r / m).powi(2)).sum::<f64>().sqrt();
        if fv.abs() < 1e-9 && gv < 1e-6 {
            return Some(x);
        }
    }
    None
}

/// Brute-force grid test on `[-3, 3]²`: some torus grid point where the
/// γ-part and its gradient are both below `tol` after normalizing by the
/// term mass.
pub fn grid_scan_degenerate(g: &SparsePolynomial, step: f64, tol: f64) -> bool {
    let grads: Vec<SparsePolynomial> = (0..g.dim()).map(|i| g.partial(i)).collect();
    let count = (6.0 / step).round() as i64;
    let mass = |x: &[f64]| -> f64 {
        g.terms()
            .map(|(e, c)| {
                (to_f64(c) * e.entries().iter().zip(x).map(|(&k, xi)| xi.powi(k as i32)).product::<f64>()).abs()
            })
            .sum()
    };
    for i in 0..=count {
        for j in 0..=count {
            let x = [-3.0 + step * i as f64, -3.0 + step * j as f64];
            if x[0].abs() < 1e-12 || x[1].abs() < 1e-12 {
                continue;
            }
            let m = mass(&x);
            if g.eval_f64(&x).abs() / m <= tol
                && grads.iter().enumerate().all(|(k, d)| (d.eval_f64(&x) * x[k]).abs() / m <= tol)
            {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::newton_polyhedron;
    use crate::rational::int;

    fn poly(dim: usize, terms: &[(&[u32], i64)]) -> SparsePolynomial {
        let t: Vec<(&[u32], i64, i64)> = terms.iter().map(|(e, c)| (*e, *c, 1)).collect();
        SparsePolynomial::from_int_terms(dim, &t).unwrap()
    }

    fn verdict(f: &SparsePolynomial) -> NondegeneracyVerdict {
        check_nondegenerate(f, &newton_polyhedron(f).unwrap(), 16, 42)
    }

    #[test]
    fn proven_cases() {
        for f in [
            poly(2, &[(&[4, 0], 1), (&[2, 2], 1), (&[0, 6], 1)]),
            poly(2, &[(&[3, 0], 1), (&[0, 2], -1)]),
            poly(2, &[(&[2, 0], 1), (&[0, 4], 1)]),
            poly(1, &[(&[3], 1)]),
        ] {
            assert_eq!(verdict(&f).status, Status::Proven, "{f}");
        }
    }

    #[test]
    fn perfect_square_is_degenerate() {
        let f = poly(2, &[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)]);
        let v = verdict(&f);
        match v.status {
            Status::Degenerate { witness, .. } => {
                assert_eq!(witness, Witness::Exact(vec![int(1), int(-1)]));
            }
            s => panic!("expected degenerate, got {s:?}"),
        }
    }

    #[test]
    fn irrational_double_root() {
        // (x^2 - 2 y^2)^2: double root z = 2 of P(z) = (z-2)^2 in z = x^2/y^2... direction (-1,1)
        let f = poly(2, &[(&[4, 0], 1), (&[2, 2], -4), (&[0, 4], 4)]);
        let v = verdict(&f);
        let Status::Degenerate { witness, .. } = v.status else { panic!("{v:?}") };
        let x = witness.to_f64();
        assert!(f.eval_f64(&x).abs() < 1e-9, "{x:?}");
    }

    #[test]
    fn three_variable_search() {
        let good = poly(3, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1)]);
        assert!(matches!(verdict(&good).status, Status::ProbablyNondegenerate { .. }));
        // (x + y + z)^2 restricted to the triangle face: degenerate along x + y + z = 0
        let bad = poly(
            3,
            &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1), (&[1, 1, 0], 2), (&[1, 0, 1], 2), (&[0, 1, 1], 2)],
        );
        let v = verdict(&bad);
        assert!(v.is_degenerate(), "{v:?}");
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let f = poly(3, &[(&[4, 0, 0], 1), (&[0, 3, 0], -1), (&[0, 0, 2], 1), (&[1, 1, 1], 1)]);
        assert_eq!(verdict(&f), verdict(&f));
    }

    #[test]
    fn grid_scan_agrees_on_simple_cases() {
        let sq = poly(2, &[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)]);
        assert!(grid_scan_degenerate(&sq, 1.0 / 200.0, 1e-6));
        let circle = poly(2, &[(&[2, 0], 1), (&[0, 2], 1)]);
        assert!(!grid_scan_degenerate(&circle, 1.0 / 200.0, 1e-6));
    }

    #[test]
    fn isolated_singularity_scan() {
        let cusp = poly(2, &[(&[3, 0], 1), (&[0, 2], -1)]);
        assert!(scan_isolated_singularity(&cusp, 0.5, 60).is_none());
    }
}
