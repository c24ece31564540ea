use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::exponent::Exponent;
use super::poly::SparsePolynomial;
use crate::error::{Error, Result};
use crate::rational::{binomial, Rational};

/// Multivariate power series truncated at a fixed total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    dim: usize,
    order: u32,
    terms: BTreeMap<Exponent, Rational>,
}

impl TruncatedSeries {
    pub fn zero(dim: usize, order: u32) -> Self {
        TruncatedSeries {
            dim,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize, order: u32) -> Self {
        let mut s = Self::zero(dim, order);
        s.add_term(Exponent::zeros(dim), Rational::one());
        s
    }

    /// Truncates a polynomial at total degree `order`.
    pub fn from_polynomial(p: &SparsePolynomial, order: u32) -> Self {
        let mut s = Self::zero(p.dim(), order);
        for (e, c) in p.terms() {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() || e.total_degree() > self.order {
            return;
        }
        match self.terms.entry(e) {
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

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Exponent::zeros(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = Self::zero(self.dim, self.order.min(other.order));
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut s = Self::zero(self.dim, self.order);
        for (e, a) in &self.terms {
            s.add_term(e.clone(), a * c);
        }
        s
    }

    /// Product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut s = Self::zero(self.dim, order);
        for (e1, c1) in &self.terms {
            let d1 = e1.total_degree();
            if d1 > order {
                continue;
            }
            for (e2, c2) in &other.terms {
                if d1 + e2.total_degree() <= order {
                    s.add_term(e1.add(e2), c1 * c2);
                }
            }
        }
        s
    }

    /// Mixed partial derivative at the origin: `μ!` times the coefficient of `y^μ`.
    pub fn jet_derivative_at_zero(&self, mu: &Exponent) -> Result<Rational> {
        if mu.dim() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: mu.dim(),
            });
        }
        let needed = mu.total_degree();
        if needed > self.order {
            return Err(Error::Precision {
                order: self.order,
                needed,
            });
        }
        Ok(self.coefficient(mu) * Rational::from_integer(mu.factorial()))
    }
}

/// `(1 + u)^s` truncated at total degree `order`, for `u` without constant term.
pub fn binomial_series_pow(u: &TruncatedSeries, s: &Rational, order: u32) -> Result<TruncatedSeries> {
    if !u.constant_term().is_zero() {
        return Err(Error::input("binomial series needs a perturbation vanishing at the origin"));
    }
    let dim = u.dim();
    let u = {
        let mut t = TruncatedSeries::zero(dim, order);
        for (e, c) in u.terms() {
            t.add_term(e.clone(), c.clone());
        }
        t
    };
    let mut result = TruncatedSeries::one(dim, order);
    let mut power = TruncatedSeries::one(dim, order);
    for k in 1..=order {
        power = power.mul(&u);
        if power.is_zero() {
            break;
        }
        let c = binomial(s, k);
        if !c.is_zero() {
            result = result.add(&power.scale(&c));
        }
    }
    Ok(result)
}

/// Exact mixed partial of a polynomial at the origin by repeated differentiation.
pub fn polynomial_derivative_at_zero(p: &SparsePolynomial, mu: &Exponent) -> Rational {
    let mut q = p.clone();
    for (axis, &k) in mu.entries().iter().enumerate() {
        for _ in 0..k {
            q = q.partial(axis);
        }
    }
    q.constant_term()
}
