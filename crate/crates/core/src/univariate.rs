//! Dense univariate polynomials over the rationals with Sturm-sequence root counting.

use num_traits::{One, Signed, Zero};

use crate::rational::{to_f64, Rational};

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<Rational>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer((k as i64).into()))
                .collect(),
        )
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let q = &r[k] / d.lead();
            for (i, c) in d.0.iter().enumerate() {
                r[k - dd + i] -= &q * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        UniPoly::new(r)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        UniPoly::new(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn sturm(&self) -> Vec<UniPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().expect("nonempty").is_zero() {
            let k = seq.len();
            let r = seq[k - 2].rem(&seq[k - 1]);
            seq.push(UniPoly::new(r.0.iter().map(|c| -c).collect()));
        }
        seq.pop();
        seq
    }

    fn sign_changes(seq: &[UniPoly], x: &Rational) -> usize {
        let signs: Vec<i8> = seq
            .iter()
            .map(|p| {
                let v = p.eval(x);
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let seq = self.sturm();
        Self::sign_changes(&seq, a).saturating_sub(Self::sign_changes(&seq, b))
    }

    /// Cauchy bound: every real root lies strictly inside `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        let l = self.lead().abs();
        let m = self.0.iter().map(|c| c.abs() / &l).fold(Rational::zero(), |a, b| if b > a { b } else { a });
        m + Rational::one()
    }

    /// Isolating intervals `(a, b]` of the distinct real roots, refined until each
    /// is narrower than `width`.
    pub fn real_roots(&self, width: &Rational) -> Vec<(Rational, Rational)> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let b = self.root_bound();
        let mut stack = vec![(-b.clone(), b)];
        let mut out = Vec::new();
        let two = Rational::from_integer(2.into());
        while let Some((lo, hi)) = stack.pop() {
            let c = self.count_roots(&lo, &hi);
            if c == 0 {
                continue;
            }
            if c == 1 && &hi - &lo < *width {
                out.push((lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / &two;
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort();
        out
    }

    /// Midpoints of the isolating intervals, as doubles.
    pub fn approximate_roots(&self) -> Vec<f64> {
        let width = Rational::new(1.into(), num_bigint::BigInt::from(1u64) << 60);
        self.real_roots(&width)
            .iter()
            .map(|(a, b)| to_f64(&((a + b) / Rational::from_integer(2.into()))))
            .collect()
    }
}
