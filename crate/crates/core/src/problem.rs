//! The JSON problem file and its validation.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice_poly::{Exponent, SparsePolynomial};
use crate::oracle::PlateauTestFunction;
use crate::rational::{parse_rational, Rational};

/// Largest dimension accepted by the exact pipeline.
pub const MAX_DIM: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub exps: Vec<u32>,
    pub coef: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiSpec {
    pub jet: Vec<TermSpec>,
    #[serde(default = "default_inner")]
    pub r_inner: String,
    #[serde(default = "default_outer")]
    pub r_outer: String,
}

fn default_inner() -> String {
    "1/2".into()
}

fn default_outer() -> String {
    "1".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    #[serde(default)]
    pub seed: u64,
    /// Quadrature tolerance for numerical verification.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub verify: bool,
    /// Sample points for the oscillatory fit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    /// Largest Taylor order used for the unit factors of the charts.
    #[serde(default = "default_series_degree")]
    pub max_series_degree: u32,
    /// Random starts per face in the non-degeneracy search (dimension ≥ 3).
    #[serde(default = "default_trials")]
    pub trials: usize,
}

fn default_tolerance() -> f64 {
    1e-8
}

fn default_series_degree() -> u32 {
    40
}

fn default_trials() -> usize {
    64
}

impl Default for OptionsSpec {
    fn default() -> Self {
        OptionsSpec {
            seed: 0,
            tolerance: default_tolerance(),
            verify: false,
            t_grid: None,
            max_series_degree: default_series_degree(),
            trials: default_trials(),
        }
    }
}

/// The problem file as written.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub variables: Vec<String>,
    pub f: Vec<TermSpec>,
    pub phi: PhiSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<String>,
    #[serde(default)]
    pub options: OptionsSpec,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Compact serialization with fields in declaration order; the input hash is taken over this.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("problem spec serializes")
    }
}

/// A validated problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub spec: ProblemSpec,
    pub names: Vec<String>,
    pub f: SparsePolynomial,
    pub phi: PlateauTestFunction,
    pub depth: Option<Rational>,
}

fn polynomial(n: usize, terms: &[TermSpec], what: &str) -> Result<SparsePolynomial> {
    let parsed = terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            if t.exps.len() != n {
                return Err(Error::input(format!(
                    "{what} term {} has {} exponents for {n} variables",
                    i + 1,
                    t.exps.len()
                )));
            }
            let c = parse_rational(&t.coef)
                .map_err(|e| Error::input(format!("{what} term {}: {e}", i + 1)))?;
            Ok((Exponent::new(t.exps.clone()), c))
        })
        .collect::<Result<Vec<_>>>()?;
    SparsePolynomial::from_terms(n, parsed)
}

impl Problem {
    pub fn from_spec(spec: ProblemSpec) -> Result<Self> {
        let n = spec.variables.len();
        if n == 0 || n > MAX_DIM {
            return Err(Error::input(format!("between 1 and {MAX_DIM} variables are supported, got {n}")));
        }
        let f = polynomial(n, &spec.f, "f")?;
        if f.is_zero() {
            return Err(Error::input("f must be nonzero"));
        }
        let jet = polynomial(n, &spec.phi.jet, "phi.jet")?;
        let r_inner = parse_rational(&spec.phi.r_inner)?;
        let r_outer = parse_rational(&spec.phi.r_outer)?;
        let phi = PlateauTestFunction::new(jet, r_inner, r_outer)?;
        let depth = spec.depth.as_deref().map(parse_rational).transpose()?;
        if depth.as_ref().is_some_and(|d| !d.is_positive()) {
            return Err(Error::input("depth must be positive"));
        }
        if spec.options.tolerance.is_nan() || spec.options.tolerance <= 0.0 {
            return Err(Error::input("tolerance must be positive"));
        }
        if let Some(grid) = &spec.options.t_grid {
            if grid.len() < 4 || grid.iter().any(|t| t.is_nan() || *t <= 0.0) || grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::input("t_grid needs at least four increasing positive values"));
            }
        }
        if !f.constant_term().is_zero() {
            return Err(Error::Precondition {
                hypothesis: "f(0) = 0".into(),
                detail: format!("f(0) = {}", f.constant_term()),
            });
        }
        Ok(Problem {
            names: spec.variables.clone(),
            f,
            phi,
            depth,
            spec,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_spec(ProblemSpec::from_json(text)?)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }
}
