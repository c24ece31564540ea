//! Orchestration: polyhedron, fan, non-degeneracy, poles, certificates, coefficients.

use std::collections::BTreeMap;

use crate::coefficients::{deepest_coefficients, sign_table, DeepestCoefficients};
use crate::error::{Error, Result};
use crate::fan::{all_charts, check_fan, resolve, ChartData, Fan, FanCheck, SubdivisionOptions};
use crate::newton::{is_convenient, newton_polyhedron, Convenience, NewtonPolyhedron};
use crate::nondegeneracy::{check_nondegenerate, scan_isolated_singularity, NondegeneracyVerdict, Status};
use crate::poles::{
    candidate_poles, default_depth, delta_lattice_points, ray_table, vanishing_certificates, zero_families,
    CandidatePole, DeltaRegion, Family, RayData, VanishingCertificate,
};
use crate::problem::Problem;
use crate::rational::Rational;

/// Which stages run and which poles are kept.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PipelineOptions {
    /// Overrides the depth of the problem file.
    pub depth: Option<Rational>,
    /// Overrides the seed of the problem file.
    pub seed: Option<u64>,
    pub skip_coefficients: bool,
    /// Keep only this pole (1-based) in the result.
    pub pole: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoleAnalysis {
    pub pole: CandidatePole,
    /// `Δ_{j,k}` for every `k` with cones of dimension `k`.
    pub deltas: Vec<DeltaRegion>,
    pub certificates: Vec<VanishingCertificate>,
    pub vanishing_from: BTreeMap<Family, usize>,
    pub deepest: Option<DeepestCoefficients>,
    /// Why the deepest coefficients were not computed.
    pub deepest_skipped: Option<String>,
    /// `(c₊, c₋)` per maximal cone in `Σ_j^{(n)}`.
    pub signs: BTreeMap<usize, (i64, i64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    pub problem: Problem,
    pub poly: NewtonPolyhedron,
    pub convenience: Convenience,
    pub coarse: Fan,
    pub fine: Fan,
    pub fan_check: FanCheck,
    pub charts: Vec<ChartData>,
    pub nondegeneracy: NondegeneracyVerdict,
    pub rays: Vec<RayData>,
    pub depth: Rational,
    pub seed: u64,
    pub poles: Vec<PoleAnalysis>,
    pub warnings: Vec<String>,
}

const FAN_SAMPLES: usize = 1000;

pub fn analyze(problem: &Problem, opts: &PipelineOptions) -> Result<Analysis> {
    let f = &problem.f;
    let n = problem.dim();
    let seed = opts.seed.unwrap_or(problem.spec.options.seed);
    let poly = newton_polyhedron(f)?;
    let convenience = is_convenient(f);
    if !convenience.convenient {
        let axes: Vec<String> = convenience.failing_axes().iter().map(|i| problem.names[*i].clone()).collect();
        return Err(Error::Precondition {
            hypothesis: "f is convenient".into(),
            detail: format!("no pure power of {}", axes.join(", ")),
        });
    }
    let nondegeneracy = check_nondegenerate(f, &poly, problem.spec.options.trials, seed);
    if let Status::Degenerate { face, witness } = &nondegeneracy.status {
        return Err(Error::Precondition {
            hypothesis: "f is non-degenerate".into(),
            detail: format!(
                "the part of f on compact face {face} has a critical zero on the torus at {:?}",
                witness.to_f64()
            ),
        });
    }
    let (coarse, fine) = resolve(&poly, f, SubdivisionOptions::default())?;
    let fan_check = check_fan(&poly, &coarse, &fine, FAN_SAMPLES, seed);
    if !fan_check.all() {
        return Err(Error::internal(format!("smooth fan failed its invariants: {fan_check:?}")));
    }
    let charts = all_charts(&fine, f, &poly)?;
    let rays = ray_table(&fine, &poly)?;
    let depth = opts
        .depth
        .clone()
        .or_else(|| problem.depth.clone())
        .unwrap_or_else(|| default_depth(&rays, n));
    let candidates = candidate_poles(&fine, &rays, &depth)?;
    if let Some(j) = opts.pole {
        if j == 0 || j > candidates.len() {
            return Err(Error::input(format!(
                "pole {j} does not exist; {} candidates up to depth {depth}",
                candidates.len()
            )));
        }
    }

    let mut warnings = vec![
        "pole orders k_j are upper bounds relative to the computed smooth subdivision".to_string(),
        "the isolated-singularity hypothesis is assumed, not verified".to_string(),
    ];
    if let Status::ProbablyNondegenerate { trials } = nondegeneracy.status {
        warnings.push(format!("non-degeneracy of faces of dimension ≥ 2 rests on {trials} random searches"));
    }
    if let Some(p) = scan_isolated_singularity(f, 0.5, 40) {
        warnings.push(format!("possible non-isolated singular point of f near {p:?}"));
    }

    let jet = &problem.phi.jet;
    let support = jet.support();
    let max_degree = problem.spec.options.max_series_degree;
    let mut poles = Vec::new();
    for pole in candidates {
        if opts.pole.is_some_and(|j| j != pole.index) {
            continue;
        }
        let deltas = (1..=n)
            .filter(|&k| !pole.cones(k).is_empty())
            .map(|k| delta_lattice_points(&pole, k, &fine))
            .collect::<Result<Vec<_>>>()?;
        let certificates = vanishing_certificates(&pole, &support, &fine);
        let vanishing_from = zero_families(&certificates);
        let needed: i64 = pole.cones(n).iter().map(|c| c.nu.iter().sum::<i64>()).max().unwrap_or(0);
        let (deepest, deepest_skipped) = if opts.skip_coefficients {
            (None, Some("coefficient stage not requested".to_string()))
        } else if pole.kj != n {
            (
                None,
                Some(format!("the order bound {} differs from the dimension {n}", pole.kj)),
            )
        } else if needed > max_degree as i64 {
            (
                None,
                Some(format!("needs Taylor order {needed}, above max_series_degree {max_degree}")),
            )
        } else {
            (Some(deepest_coefficients(&pole, &fine, &charts, jet)), None)
        };
        if pole.is_integer && deepest.as_ref().is_some_and(|d| d.c_osc.is_some()) {
            warnings.push(format!(
                "pole {}: the oscillatory coefficient at an integer exponent is reported with a caveat",
                pole.index
            ));
        }
        let signs = if pole.kj == n { sign_table(&pole, &charts) } else { BTreeMap::new() };
        poles.push(PoleAnalysis {
            pole,
            deltas,
            certificates,
            vanishing_from,
            deepest,
            deepest_skipped,
            signs,
        });
    }

    Ok(Analysis {
        problem: problem.clone(),
        poly,
        convenience,
        coarse,
        fine,
        fan_check,
        charts,
        nondegeneracy,
        rays,
        depth,
        seed,
        poles,
        warnings,
    })
}
