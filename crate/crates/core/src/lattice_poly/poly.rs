use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::exponent::Exponent;
use crate::error::{Error, Result};
use crate::rational::{format_rational, to_f64, Rational};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored, so two polynomials are equal iff their
/// term maps are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePolynomial {
    dim: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl SparsePolynomial {
    pub fn zero(dim: usize) -> Self {
        SparsePolynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::monomial(Exponent::zeros(dim), c)
    }

    pub fn monomial(exp: Exponent, c: Rational) -> Self {
        let mut p = Self::zero(exp.dim());
        p.add_term(exp, c);
        p
    }

    /// Builds a polynomial, summing repeated exponents and dropping zeros.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        if dim == 0 {
            return Err(Error::input("polynomial dimension must be at least 1"));
        }
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: e.dim(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Convenience constructor from integer exponent rows and `(num, den)` coefficients.
    pub fn from_int_terms(dim: usize, terms: &[(&[u32], i64, i64)]) -> Result<Self> {
        Self::from_terms(
            dim,
            terms
                .iter()
                .map(|(e, n, d)| (Exponent::new(e.to_vec()), crate::rational::rat(*n, *d))),
        )
    }

    fn add_term(&mut self, exp: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, e: &Exponent) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Exponent::zeros(self.dim))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Exponent::total_degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut p = Self::zero(self.dim);
        for (e, a) in &self.terms {
            p.add_term(e.clone(), a * c);
        }
        p
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &k) in x.iter().zip(e.entries()) {
                term *= num_traits::pow(xi.clone(), k as usize);
            }
            acc += term;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.entries()
                    .iter()
                    .zip(x)
                    .fold(to_f64(c), |acc, (&k, &xi)| acc * xi.powi(k as i32))
            })
            .sum()
    }

    /// Formal partial derivative in variable `axis`.
    pub fn partial(&self, axis: usize) -> Self {
        let mut p = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let k = e.entries()[axis];
            if k == 0 {
                continue;
            }
            let mut v = e.entries().to_vec();
            v[axis] -= 1;
            p.add_term(Exponent::new(v), c * Rational::from_integer(BigInt::from(k)));
        }
        p
    }

    /// Substitutes `x_j ↦ ∏_i y_i^{A_ij}`; the term `x^α` goes to `y^{Aα}` where
    /// row `i` of `A` is the generator `a^i`, so the `i`-th exponent is `⟨a^i, α⟩`.
    pub fn monomial_pullback(&self, matrix: &[Vec<i64>]) -> Result<Self> {
        if matrix.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: matrix.len(),
            });
        }
        for row in matrix {
            if row.len() != self.dim {
                return Err(Error::Dimension {
                    expected: self.dim,
                    got: row.len(),
                });
            }
            if row.iter().any(|&a| a < 0) {
                return Err(Error::input("pullback matrix must have non-negative entries"));
            }
        }
        let mut p = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let image: Vec<u32> = matrix.iter().map(|row| e.dot(row) as u32).collect();
            p.add_term(Exponent::new(image), c.clone());
        }
        Ok(p)
    }

    /// Exact division by the monomial `y^m`; fails if some term is not divisible.
    pub fn divide_by_monomial(&self, m: &Exponent) -> Result<Self> {
        let mut p = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let q = e.checked_sub(m).ok_or_else(|| {
                Error::internal(format!("term y^{e} is not divisible by y^{m}"))
            })?;
            p.add_term(q, c.clone());
        }
        Ok(p)
    }

    /// Coefficient-wise map to doubles, for numerical evaluation.
    pub fn to_f64_terms(&self) -> Vec<(Vec<u32>, f64)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.entries().to_vec(), to_f64(c)))
            .collect()
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .entries()
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    let name = names.get(j).cloned().unwrap_or_else(|| format!("x{}", j + 1));
                    if k == 1 {
                        name
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&format_rational(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&format_rational(&mag));
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.dim).map(|i| format!("x{i}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

impl Add for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn add(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in polynomial sum");
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl Sub for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn sub(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        self + &(-rhs)
    }
}

impl Neg for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn neg(self) -> SparsePolynomial {
        self.scale(&-Rational::one())
    }
}

impl Mul for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn mul(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in polynomial product");
        let mut p = SparsePolynomial::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                p.add_term(e1.add(e2), c1 * c2);
            }
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn w1() -> SparsePolynomial {
        SparsePolynomial::from_int_terms(2, &[(&[4, 0], 1, 1), (&[2, 2], 1, 1), (&[0, 6], 1, 1)]).unwrap()
    }

    #[test]
    fn pullback_of_w1_on_its_chart() {
        let p = w1().monomial_pullback(&[vec![2, 1], vec![1, 1]]).unwrap();
        let expected = SparsePolynomial::from_int_terms(
            2,
            &[(&[8, 4], 1, 1), (&[6, 4], 1, 1), (&[6, 6], 1, 1)],
        )
        .unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn identity_pullback_is_identity() {
        let p = w1();
        assert_eq!(p.monomial_pullback(&[vec![1, 0], vec![0, 1]]).unwrap(), p);
        let cube = SparsePolynomial::from_int_terms(1, &[(&[3], 1, 1)]).unwrap();
        assert_eq!(cube.monomial_pullback(&[vec![1]]).unwrap(), cube);
    }

    #[test]
    fn pullback_merges_colliding_terms() {
        // x and y both map to y1 under rows (1,1): x + y -> 2 y1.
        let p = SparsePolynomial::from_int_terms(2, &[(&[1, 0], 1, 1), (&[0, 1], 1, 1)]).unwrap();
        let q = p.monomial_pullback(&[vec![1, 1], vec![0, 0]]).unwrap();
        assert_eq!(q.coefficient(&Exponent::new(vec![1, 0])), int(2));
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn pullback_rejects_bad_matrices() {
        let p = w1();
        assert!(matches!(p.monomial_pullback(&[vec![1, 0]]), Err(Error::Dimension { .. })));
        assert!(p.monomial_pullback(&[vec![1, -1], vec![0, 1]]).is_err());
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = SparsePolynomial::from_int_terms(1, &[(&[2], 1, 2), (&[2], -1, 2), (&[1], 3, 1)]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&Exponent::new(vec![1])), int(3));
    }

    #[test]
    fn arithmetic_and_evaluation() {
        let x = SparsePolynomial::monomial(Exponent::unit(2, 0, 1), int(1));
        let y = SparsePolynomial::monomial(Exponent::unit(2, 1, 1), int(1));
        let s = &x + &y;
        let sq = &s * &s;
        assert_eq!(sq.eval(&[int(1), int(-1)]), int(0));
        assert_eq!(sq.eval(&[rat(1, 2), int(1)]), rat(9, 4));
        assert!((sq.eval_f64(&[0.5, 1.0]) - 2.25).abs() < 1e-15);
        assert_eq!(sq.partial(0), (&x + &y).scale(&int(2)));
        assert_eq!(format!("{}", sq), "x1^2 + 2*x1*x2 + x2^2");
    }

    #[test]
    fn monomial_division() {
        let p = w1().monomial_pullback(&[vec![2, 1], vec![1, 1]]).unwrap();
        let q = p.divide_by_monomial(&Exponent::new(vec![6, 4])).unwrap();
        assert_eq!(q.constant_term(), int(1));
        assert!(p.divide_by_monomial(&Exponent::new(vec![7, 0])).is_err());
    }
}
