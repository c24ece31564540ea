//! Independent numerical and closed-form checks of the exact pipeline.

pub mod closed_form;
pub mod continuation;
pub mod direct;
pub mod fit;
pub mod plateau;
pub mod quadrature;
pub mod series;

pub use closed_form::{monomial_laurent_deepest, residue_1d, MonomialWeightSpec, Side};
pub use continuation::{ContinuationOptions, ContinuedZeta, SignMode};
pub use direct::{oscillatory_integral, zeta_quadrature};
pub use fit::{laurent_fit, oscillatory_fit, oscillatory_model, FitOptions, LaurentFit, OscillatoryFit};
pub use plateau::{CutoffShape, PlateauTestFunction};
pub use quadrature::{integrate, integrate_box, Estimate, QuadOptions};
