//! Exact polynomial and truncated power-series arithmetic over the rationals.

mod exponent;
mod poly;
mod scalar;
mod series;

pub use exponent::Exponent;
pub use poly::SparsePolynomial;
pub use scalar::AlgebraicScalar;
pub use series::{binomial_series_pow, polynomial_derivative_at_zero, TruncatedSeries};
