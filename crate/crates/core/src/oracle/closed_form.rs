//! Closed-form Laurent data for one-dimensional and monomial-weight integrals.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice_poly::{Exponent, SparsePolynomial};
use crate::rational::{is_integer, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `∫_0^∞ x^{lλ+m} φ(x) dx`.
    Plus,
    /// `∫_0^∞ x^{lλ+m} φ(-x) dx`.
    Minus,
}

/// Residue of `∫_0^∞ x^{lλ+m} φ(±x) dx` at `λ = -(m+r)/l`; the jet holds the
/// Taylor coefficients `φ^{(k)}(0)/k!`.
pub fn residue_1d(l: &Rational, m: &Rational, r: i64, jet: &SparsePolynomial, side: Side) -> Result<Rational> {
    if r <= 0 {
        return Err(Error::input("the residue index r must be positive"));
    }
    if !l.is_positive() || m.is_negative() {
        return Err(Error::input("need l > 0 and m ≥ 0"));
    }
    if jet.dim() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            got: jet.dim(),
        });
    }
    let c = jet.coefficient(&Exponent::new(vec![(r - 1) as u32]));
    let sign = if side == Side::Minus && r % 2 == 0 { -Rational::one() } else { Rational::one() };
    Ok(sign * c / l)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonomialWeightSpec {
    pub slopes: Vec<Rational>,
    pub shifts: Vec<Rational>,
    /// Integrate over the whole space with `|x_i|` rather than the positive orthant.
    pub absolute: bool,
}

impl MonomialWeightSpec {
    /// Ladder indices `ν_i = λ l_i − m_i − 1`, all required to be non-negative integers.
    pub fn ladder_indices(&self, lambda: &Rational) -> Result<Vec<u32>> {
        if self.slopes.len() != self.shifts.len() {
            return Err(Error::Dimension {
                expected: self.slopes.len(),
                got: self.shifts.len(),
            });
        }
        self.slopes
            .iter()
            .zip(&self.shifts)
            .enumerate()
            .map(|(i, (l, m))| {
                if !l.is_positive() || m.is_negative() {
                    return Err(Error::input("need l_i > 0 and m_i ≥ 0"));
                }
                let nu = lambda * l - m - Rational::one();
                if !is_integer(&nu) || nu.is_negative() {
                    return Err(Error::NotApplicable(format!(
                        "variable {} does not reach a pole of order n at λ = {lambda}",
                        i + 1
                    )));
                }
                Ok(nu.to_integer().try_into().expect("small ladder index"))
            })
            .collect()
    }
}

/// Coefficient of `(λ+λ_j)^{-n}` in the expansion of the monomial-weight integral.
pub fn monomial_laurent_deepest(spec: &MonomialWeightSpec, lambda: &Rational, jet: &SparsePolynomial) -> Result<Rational> {
    let nu = spec.ladder_indices(lambda)?;
    if jet.dim() != nu.len() {
        return Err(Error::Dimension {
            expected: nu.len(),
            got: jet.dim(),
        });
    }
    let mut out = jet.coefficient(&Exponent::new(nu.clone()));
    for (l, &v) in spec.slopes.iter().zip(&nu) {
        out /= l;
        if spec.absolute {
            if v % 2 == 1 {
                return Ok(Rational::zero());
            }
            out *= Rational::from_integer(2.into());
        }
    }
    Ok(out)
}
