use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{exact_root, format_rational, pow_int, to_f64, Rational};

/// A finite sum `Σ r·b^e` with rational `r`, rational base `b > 0` and rational
/// exponent `e`, kept in a canonical form.
///
/// Irrational terms are stored with `0 < e < 1` and a base `b > 1` that is not a
/// perfect power; the rational part is stored under `b = 1, e = 0`. Terms with
/// equal `(b, e)` are merged.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgebraicScalar {
    // key (base, exponent) -> coefficient; the rational part lives under (1, 0)
    terms: BTreeMap<(Rational, Rational), Rational>,
}

fn rational_key() -> (Rational, Rational) {
    (Rational::one(), Rational::zero())
}

/// Largest `k >= 2` with `n` a perfect `k`-th power, paired with the root.
fn perfect_power(n: &BigInt) -> Option<(BigInt, u32)> {
    if n <= &BigInt::one() {
        return None;
    }
    let bits = n.bits() as u32;
    for k in (2..=bits).rev() {
        let r = n.nth_root(k);
        if num_traits::pow(r.clone(), k as usize) == *n {
            return Some((r, k));
        }
    }
    None
}

/// Rewrites `b^e` as `factor · b'^e'` with `0 <= e' < 1` and `b'` not a perfect power.
fn canonical_power(base: &Rational, exp: &Rational) -> (Rational, Rational, Rational) {
    let mut b = base.clone();
    let mut e = exp.clone();
    let mut factor = Rational::one();
    // b < 1: flip so that the base exceeds one
    if b < Rational::one() {
        b = b.recip();
        e = -e;
    }
    loop {
        let whole = e.floor();
        if !whole.is_zero() {
            let k = whole.to_integer().to_i64().expect("exponent fits in i64");
            factor *= pow_int(&b, k);
            e -= whole;
        }
        if e.is_zero() || b.is_one() {
            return (factor, Rational::one(), Rational::zero());
        }
        let q = e.denom().to_u32().unwrap_or(u32::MAX);
        if let Some(root) = exact_root(&b, q) {
            factor *= pow_int(&root, e.numer().to_i64().expect("small numerator"));
            return (factor, Rational::one(), Rational::zero());
        }
        // gcd-style reduction: b = c^k with a common power in numerator and denominator
        let (n, d) = (b.numer().clone(), b.denom().clone());
        let pn = perfect_power(&n);
        let pd = perfect_power(&d);
        let k = match (&pn, &pd, d.is_one()) {
            (Some((_, kn)), _, true) => *kn,
            (Some((_, kn)), Some((_, kd)), false) => num_integer::gcd(*kn, *kd),
            _ => 1,
        };
        if k < 2 {
            return (factor, b, e);
        }
        let root = exact_root(&b, k).expect("common perfect power");
        b = root;
        e *= Rational::from_integer(BigInt::from(k));
    }
}

impl AlgebraicScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut s = Self::zero();
        s.push(rational_key(), r);
        s
    }

    /// The single term `r · b^e`.
    pub fn term(r: Rational, base: Rational, exp: Rational) -> Result<Self> {
        if !base.is_positive() {
            return Err(Error::input(format!(
                "algebraic scalar base must be positive, got {}",
                format_rational(&base)
            )));
        }
        let (factor, b, e) = canonical_power(&base, &exp);
        let mut s = Self::zero();
        s.push((b, e), r * factor);
        Ok(s)
    }

    fn push(&mut self, key: (Rational, Rational), r: Rational) {
        if r.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += r;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Canonical terms `(r, b, e)`, rational part first.
    pub fn terms(&self) -> Vec<(Rational, Rational, Rational)> {
        self.terms
            .iter()
            .map(|((b, e), r)| (r.clone(), b.clone(), e.clone()))
            .collect()
    }

    /// The exact value when no irrational power survives.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&rational_key()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (k, r) in &other.terms {
            s.push(k.clone(), r.clone());
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut s = Self::zero();
        for (k, r) in &self.terms {
            s.push(k.clone(), r * c);
        }
        s
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|((b, e), r)| {
                if e.is_zero() {
                    to_f64(r)
                } else {
                    to_f64(r) * (to_f64(e) * to_f64(b).ln()).exp()
                }
            })
            .fold(0.0, |acc, v| acc + v)
    }
}

impl fmt::Display for AlgebraicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((b, e), r)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{}", format_rational(r))?;
            } else {
                write!(f, "{}*({})^({})", format_rational(r), format_rational(b), format_rational(e))?;
            }
        }
        Ok(())
    }
}
