//! Candidate poles, their cone profiles, the regions Δ and vanishing certificates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice_poly::Exponent;
use crate::newton::NewtonPolyhedron;
use crate::rational::{is_integer, is_odd_integer, Rational};

/// A ray of the smooth fan with its support value `l(a)` and coordinate sum `|a|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayData {
    pub ray: Vec<i64>,
    pub l: i64,
    pub norm: i64,
}

pub fn ray_table(fan: &Fan, poly: &NewtonPolyhedron) -> Result<Vec<RayData>> {
    fan.rays
        .iter()
        .map(|r| {
            Ok(RayData {
                ray: r.clone(),
                l: poly.support_min(r)?,
                norm: r.iter().sum(),
            })
        })
        .collect()
}

/// Ladder index `ν` with `λ = (|a| + ν) / l`, if it is a non-negative integer.
pub fn ladder_index(lambda: &Rational, ray: &RayData) -> Option<i64> {
    if ray.l <= 0 {
        return None;
    }
    let v = lambda * Rational::from_integer(ray.l.into()) - Rational::from_integer(ray.norm.into());
    if is_integer(&v) && !v.is_negative() {
        v.to_integer().to_i64()
    } else {
        None
    }
}

/// A cone of the smooth fan all of whose rays carry `λ` on their ladder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeEntry {
    /// Ray indices; for maximal cones in oriented order.
    pub rays: Vec<usize>,
    pub nu: Vec<i64>,
    /// Index into the fan's maximal cones when the cone is maximal.
    pub maximal: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidatePole {
    /// 1-based position in increasing order of `λ`.
    pub index: usize,
    pub lambda: Rational,
    pub is_integer: bool,
    /// Rays whose ladder contains `λ`.
    pub contributing_rays: Vec<usize>,
    /// `sigma[k - 1]` lists the `k`-dimensional cones of the profile.
    pub sigma: Vec<Vec<ConeEntry>>,
    /// Upper bound for the pole order.
    pub kj: usize,
}

impl CandidatePole {
    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    pub fn cones(&self, k: usize) -> &[ConeEntry] {
        if k == 0 || k > self.sigma.len() {
            &[]
        } else {
            &self.sigma[k - 1]
        }
    }
}

/// Default enumeration depth: twice the largest `(|a| + n) / l` over rays with `l > 0`.
pub fn default_depth(rays: &[RayData], n: usize) -> Rational {
    let best = rays
        .iter()
        .filter(|r| r.l > 0)
        .map(|r| Rational::new((r.norm + n as i64).into(), r.l.into()))
        .max()
        .unwrap_or_else(|| Rational::from_integer(1.into()));
    best * Rational::from_integer(2.into())
}

pub fn pole_profile(lambda: &Rational, fan: &Fan, rays: &[RayData]) -> CandidatePole {
    let n = fan.dim;
    let contributing: Vec<usize> = (0..rays.len())
        .filter(|&i| ladder_index(lambda, &rays[i]).is_some())
        .collect();
    let on_ladder: BTreeSet<usize> = contributing.iter().copied().collect();
    let entry = |cone: &[usize], maximal: Option<usize>| -> Option<ConeEntry> {
        if !cone.iter().all(|r| on_ladder.contains(r)) {
            return None;
        }
        Some(ConeEntry {
            rays: cone.to_vec(),
            nu: cone
                .iter()
                .map(|&r| ladder_index(lambda, &rays[r]).expect("ladder ray"))
                .collect(),
            maximal,
        })
    };
    let mut sigma = Vec::with_capacity(n);
    for k in 1..=n {
        let list: Vec<ConeEntry> = if k == n {
            fan.maximal
                .iter()
                .enumerate()
                .filter_map(|(ci, c)| entry(c, Some(ci)))
                .collect()
        } else {
            fan.cones_of_dim(k).iter().filter_map(|c| entry(c, None)).collect()
        };
        sigma.push(list);
    }
    let top = (1..=n).rev().find(|&k| !sigma[k - 1].is_empty()).unwrap_or(0);
    let integer = is_integer(lambda);
    CandidatePole {
        index: 0,
        lambda: lambda.clone(),
        is_integer: integer,
        contributing_rays: contributing,
        sigma,
        kj: top + usize::from(integer),
    }
}

/// Every member `λ ≤ depth` of the candidate set, in increasing order, with profiles.
pub fn candidate_poles(fan: &Fan, rays: &[RayData], depth: &Rational) -> Result<Vec<CandidatePole>> {
    if !depth.is_positive() {
        return Err(Error::input("the enumeration depth must be positive"));
    }
    let mut values: BTreeSet<Rational> = BTreeSet::new();
    let mut k = BigInt::from(1);
    while Rational::from_integer(k.clone()) <= *depth {
        values.insert(Rational::from_integer(k.clone()));
        k += 1;
    }
    for r in rays.iter().filter(|r| r.l > 0) {
        let mut nu = 0i64;
        loop {
            let v = Rational::new((r.norm + nu).into(), r.l.into());
            if v > *depth {
                break;
            }
            values.insert(v);
            nu += 1;
        }
    }
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(i, lambda)| {
            let mut p = pole_profile(&lambda, fan, rays);
            p.index = i + 1;
            p
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaRegion {
    pub j: usize,
    pub k: usize,
    /// Per cone: the generators and right-hand sides of `⟨a^i, α⟩ ≤ ν_i`.
    pub polytopes: Vec<(Vec<Vec<i64>>, Vec<i64>)>,
    /// Integer points of the union, sorted.
    pub lattice_points: Vec<Exponent>,
}

impl DeltaRegion {
    pub fn contains(&self, alpha: &Exponent) -> bool {
        self.lattice_points.binary_search(alpha).is_ok()
    }
}

fn polytope_points(gens: &[Vec<i64>], nu: &[i64], n: usize) -> Vec<Exponent> {
    let bounds: Vec<i64> = (0..n)
        .map(|m| {
            gens.iter()
                .zip(nu)
                .filter(|(a, _)| a[m] > 0)
                .map(|(a, &v)| v.div_euclid(a[m]))
                .min()
                .unwrap_or(0)
        })
        .collect();
    let mut out = Vec::new();
    if bounds.iter().any(|&b| b < 0) {
        return out;
    }
    let mut x = vec![0i64; n];
    loop {
        if gens.iter().zip(nu).all(|(a, &v)| crate::linalg::dot(a, &x) <= v) {
            out.push(Exponent::new(x.iter().map(|&v| v as u32).collect()));
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            x[i] += 1;
            if x[i] <= bounds[i] {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

/// Lattice points of `Δ_{j,k}`, the union over the profile's `k`-cones of
/// `{α ≥ 0 : ⟨a^i, α⟩ ≤ ν_i}`.
pub fn delta_lattice_points(pole: &CandidatePole, k: usize, fan: &Fan) -> Result<DeltaRegion> {
    let cones = pole.cones(k);
    if cones.is_empty() {
        return Err(Error::input(format!(
            "no {k}-dimensional cone in the profile of λ = {}",
            crate::rational::format_rational(&pole.lambda)
        )));
    }
    let mut pts = BTreeSet::new();
    let mut polytopes = Vec::new();
    for c in cones {
        let gens: Vec<Vec<i64>> = c.rays.iter().map(|&r| fan.rays[r].clone()).collect();
        pts.extend(polytope_points(&gens, &c.nu, fan.dim));
        polytopes.push((gens, c.nu.clone()));
    }
    Ok(DeltaRegion {
        j: pole.index,
        k,
        polytopes,
        lattice_points: pts.into_iter().collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rule {
    ParityMtI,
    ParityMtIi,
    SupportVtI,
    SupportVtIi,
    SupportVt2I,
    SupportVt2Ii,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::ParityMtI => "ParityMT_i",
            Rule::ParityMtIi => "ParityMT_ii",
            Rule::SupportVtI => "SupportVT_i",
            Rule::SupportVtIi => "SupportVT_ii",
            Rule::SupportVt2I => "SupportVT2_i",
            Rule::SupportVt2Ii => "SupportVT2_ii",
        })
    }
}

/// Which Laurent or asymptotic coefficient family a certificate annihilates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    /// `a_{j,k}` of `∫ |f|^λ φ`.
    Abs,
    /// `a⁺_{j,k}` of `∫ f₊^λ φ`.
    Plus,
    /// `a⁻_{j,k}` of `∫ f₋^λ φ`.
    Minus,
    /// `c_{j,k}` of the oscillatory integral.
    Oscillatory,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Abs => "a",
            Family::Plus => "a_plus",
            Family::Minus => "a_minus",
            Family::Oscillatory => "c_osc",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// For every cone of the inspected dimension, a position with odd `ν`.
    OddNu { dim: usize, witnesses: Vec<(Vec<usize>, usize)> },
    /// The jet support misses every lattice point of `Δ_{j,dim}`.
    DisjointSupport { dim: usize, delta_points: Vec<Exponent> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingCertificate {
    pub j: usize,
    /// Coefficients `k..=kj` vanish.
    pub from_k: usize,
    pub to_k: usize,
    pub rule: Rule,
    pub families: Vec<Family>,
    pub evidence: Evidence,
}

fn odd_witnesses(cones: &[ConeEntry]) -> Option<Vec<(Vec<usize>, usize)>> {
    cones
        .iter()
        .map(|c| c.nu.iter().position(|v| v % 2 != 0).map(|i| (c.rays.clone(), i)))
        .collect()
}

fn delta_points_or_empty(pole: &CandidatePole, k: usize, fan: &Fan) -> Vec<Exponent> {
    delta_lattice_points(pole, k, fan)
        .map(|d| d.lattice_points)
        .unwrap_or_default()
}

/// Certificates from the parity and support vanishing theorems, one per rule
/// and starting index `k` whose hypothesis holds.
pub fn vanishing_certificates(pole: &CandidatePole, jet_support: &[Exponent], fan: &Fan) -> Vec<VanishingCertificate> {
    let mut out = Vec::new();
    let odd = is_odd_integer(&pole.lambda);
    let integer = pole.is_integer;
    let disjoint = |dim: usize| -> Option<Vec<Exponent>> {
        let pts = delta_points_or_empty(pole, dim, fan);
        if jet_support.iter().any(|a| pts.binary_search(a).is_ok()) {
            None
        } else {
            Some(pts)
        }
    };
    for k in 1..=pole.kj {
        let mut push = |rule, families: Vec<Family>, evidence| {
            out.push(VanishingCertificate {
                j: pole.index,
                from_k: k,
                to_k: pole.kj,
                rule,
                families,
                evidence,
            })
        };
        // parity theorem
        if !odd {
            if let Some(w) = odd_witnesses(pole.cones(k)) {
                push(Rule::ParityMtI, vec![Family::Abs], Evidence::OddNu { dim: k, witnesses: w });
            }
        } else if k >= 2 {
            if let Some(w) = odd_witnesses(pole.cones(k - 1)) {
                push(Rule::ParityMtIi, vec![Family::Abs], Evidence::OddNu { dim: k - 1, witnesses: w });
            }
        }
        // support theorems
        let signed = vec![Family::Plus, Family::Minus, Family::Oscillatory];
        if !odd {
            if let Some(pts) = disjoint(k) {
                push(Rule::SupportVtI, vec![Family::Abs], Evidence::DisjointSupport { dim: k, delta_points: pts });
            }
        } else if k >= 2 {
            if let Some(pts) = disjoint(k - 1) {
                push(
                    Rule::SupportVtIi,
                    vec![Family::Abs],
                    Evidence::DisjointSupport { dim: k - 1, delta_points: pts },
                );
            }
        }
        if !integer {
            if let Some(pts) = disjoint(k) {
                push(Rule::SupportVt2I, signed, Evidence::DisjointSupport { dim: k, delta_points: pts });
            }
        } else if k >= 2 {
            if let Some(pts) = disjoint(k - 1) {
                push(Rule::SupportVt2Ii, signed, Evidence::DisjointSupport { dim: k - 1, delta_points: pts });
            }
        }
    }
    out
}

/// Re-derives a certificate's hypothesis from the profile and jet support alone.
pub fn recheck_certificate(cert: &VanishingCertificate, pole: &CandidatePole, jet_support: &[Exponent], fan: &Fan) -> bool {
    let odd = is_odd_integer(&pole.lambda);
    let branch_ok = match cert.rule {
        Rule::ParityMtI | Rule::SupportVtI => !odd,
        Rule::ParityMtIi | Rule::SupportVtIi => odd && cert.from_k >= 2,
        Rule::SupportVt2I => !pole.is_integer,
        Rule::SupportVt2Ii => pole.is_integer && cert.from_k >= 2,
    };
    if !branch_ok || cert.from_k == 0 || cert.from_k > pole.kj || cert.to_k != pole.kj {
        return false;
    }
    match &cert.evidence {
        Evidence::OddNu { dim, witnesses } => {
            let cones = pole.cones(*dim);
            cones.len() == witnesses.len()
                && cones.iter().zip(witnesses).all(|(c, (rays, i))| c.rays == *rays && c.nu[*i] % 2 != 0)
        }
        Evidence::DisjointSupport { dim, .. } => {
            let pts = delta_points_or_empty(pole, *dim, fan);
            !jet_support.iter().any(|a| pts.binary_search(a).is_ok())
        }
    }
}

/// Smallest certified starting index `k` per family: coefficients `k..=kj` vanish.
pub fn zero_families(certs: &[VanishingCertificate]) -> BTreeMap<Family, usize> {
    let mut out: BTreeMap<Family, usize> = BTreeMap::new();
    for c in certs {
        for f in &c.families {
            let e = out.entry(*f).or_insert(c.from_k);
            *e = (*e).min(c.from_k);
        }
    }
    out
}
