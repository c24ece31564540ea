pub mod coefficients;
pub mod error;
pub mod fan;
pub mod lattice_poly;
pub mod linalg;
pub mod newton;
pub mod nondegeneracy;
pub mod oracle;
pub mod pipeline;
pub mod poles;
pub mod problem;
pub mod rational;
pub mod report;
mod univariate;
pub mod verify;

pub use error::{Error, Result};
