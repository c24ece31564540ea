use crate::error::{Error, Result};
use crate::lattice_poly::SparsePolynomial;
use crate::rational::{to_f64, Rational};

/// How the cutoff measures distance from the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CutoffShape {
    /// `χ(|x|)` with the Euclidean norm.
    #[default]
    Radial,
    /// `∏ χ(|x_i|)`, one factor per coordinate.
    Product,
}

/// Smooth step: 0 for `t ≤ 0`, 1 for `t ≥ 1`, `C^∞` in between.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

/// A polynomial jet times a plateau cutoff that is identically 1 near the origin,
/// so the Taylor data at 0 is exactly the jet.
#[derive(Clone, Debug, PartialEq)]
pub struct PlateauTestFunction {
    pub jet: SparsePolynomial,
    pub r_inner: Rational,
    pub r_outer: Rational,
    pub shape: CutoffShape,
}

impl PlateauTestFunction {
    pub fn new(jet: SparsePolynomial, r_inner: Rational, r_outer: Rational) -> Result<Self> {
        use num_traits::Zero;
        if !(r_inner > Rational::zero() && r_inner < r_outer) {
            return Err(Error::input("plateau radii must satisfy 0 < r_inner < r_outer"));
        }
        Ok(PlateauTestFunction {
            jet,
            r_inner,
            r_outer,
            shape: CutoffShape::Radial,
        })
    }

    pub fn with_shape(mut self, shape: CutoffShape) -> Self {
        self.shape = shape;
        self
    }

    pub fn dim(&self) -> usize {
        self.jet.dim()
    }

    pub fn inner(&self) -> f64 {
        to_f64(&self.r_inner)
    }

    pub fn outer(&self) -> f64 {
        to_f64(&self.r_outer)
    }

    /// The one-dimensional profile `χ(s)`.
    pub fn profile(&self, s: f64) -> f64 {
        let (ri, ro) = (self.inner(), self.outer());
        smooth_step((ro - s) / (ro - ri))
    }

    pub fn cutoff(&self, x: &[f64]) -> f64 {
        match self.shape {
            CutoffShape::Radial => self.profile(x.iter().map(|v| v * v).sum::<f64>().sqrt()),
            CutoffShape::Product => x.iter().map(|v| self.profile(v.abs())).product(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let c = self.cutoff(x);
        if c == 0.0 {
            0.0
        } else {
            c * self.jet.eval_f64(x)
        }
    }
}
