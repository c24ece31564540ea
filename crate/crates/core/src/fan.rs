//! Dual fan of a Newton polyhedron, its unimodular refinement, and chart data.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice_poly::{Exponent, SparsePolynomial};
use crate::linalg::{self, det_i64};
use crate::newton::{is_convenient, NewtonPolyhedron};
use crate::rational::Rational;

/// A rational polyhedral cone given by its ordered primitive generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    pub generators: Vec<Vec<i64>>,
}

impl Cone {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn determinant(&self) -> i64 {
        det_i64(&self.generators)
    }

    /// Coordinates of `w` in the generator basis, for a full-dimensional simplicial cone.
    pub fn coordinates(&self, w: &[Rational]) -> Option<Vec<Rational>> {
        let n = self.generators.len();
        let m: Vec<Vec<Rational>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| Rational::from_integer(self.generators[i][j].into()))
                    .collect()
            })
            .collect();
        linalg::solve(&m, w)
    }

    pub fn contains(&self, w: &[Rational]) -> bool {
        self.coordinates(w).is_some_and(|c| linalg::is_nonneg(&c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    /// Maximal cones as ray-index tuples. For a smooth fan the order is the
    /// oriented one (generator determinant +1).
    pub maximal: Vec<Vec<usize>>,
    /// For the dual fan: the Newton vertex dual to each maximal cone. For a
    /// refinement: the index of the containing maximal cone of the coarse fan.
    pub parent: Vec<usize>,
}

impl Fan {
    pub fn cone(&self, idx: usize) -> Cone {
        Cone {
            generators: self.maximal[idx].iter().map(|&r| self.rays[r].clone()).collect(),
        }
    }

    pub fn maximal_cones(&self) -> Vec<Cone> {
        (0..self.maximal.len()).map(|i| self.cone(i)).collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.maximal.iter().all(|c| c.len() == self.dim)
    }

    /// Codimension-one cones (as sorted ray-index sets) and the maximal cones they border.
    pub fn adjacency(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut out: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        if !self.is_simplicial() {
            return out;
        }
        for (ci, c) in self.maximal.iter().enumerate() {
            for skip in 0..c.len() {
                let mut face: Vec<usize> = c.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &r)| r).collect();
                face.sort_unstable();
                out.entry(face).or_default().push(ci);
            }
        }
        out
    }

    /// All cones of dimension `k` of a simplicial fan, as sorted ray-index sets.
    pub fn cones_of_dim(&self, k: usize) -> Vec<Vec<usize>> {
        let mut set = BTreeSet::new();
        for c in &self.maximal {
            let mut sorted = c.clone();
            sorted.sort_unstable();
            for sub in subsets(&sorted, k) {
                set.insert(sub);
            }
        }
        set.into_iter().collect()
    }
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn det2(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// The dual fan: rays are the facet normals, maximal cones are the normal cones
/// of the vertices.
pub fn normal_fan(poly: &NewtonPolyhedron, f: &SparsePolynomial) -> Result<Fan> {
    let conv = is_convenient(f);
    if !conv.convenient {
        let axes: Vec<String> = conv.failing_axes().iter().map(|i| (i + 1).to_string()).collect();
        return Err(Error::Precondition {
            hypothesis: "convenience".into(),
            detail: format!("no pure power of variable(s) {} in the support", axes.join(", ")),
        });
    }
    let n = poly.dim;
    let mut rays: Vec<Vec<i64>> = poly.facets.iter().map(|f| f.normal.clone()).collect();
    if n == 2 {
        rays.sort_by(|a, b| 0.cmp(&det2(a, b)));
    }
    let mut maximal = Vec::new();
    let mut parent = Vec::new();
    for (vi, v) in poly.vertices.iter().enumerate() {
        let mut cone: Vec<usize> = (0..rays.len())
            .filter(|&ri| v.dot(&rays[ri]) == poly.support_min(&rays[ri]).expect("non-negative ray"))
            .collect();
        cone.sort_unstable();
        maximal.push(cone);
        parent.push(vi);
    }
    Ok(Fan {
        dim: n,
        rays,
        maximal,
        parent,
    })
}

/// Whether `a ≥ 0` lies in the normal cone of vertex `v`.
pub fn in_normal_cone(poly: &NewtonPolyhedron, v: &Exponent, a: &[Rational]) -> bool {
    if a.iter().any(|x| x.is_negative()) {
        return false;
    }
    let val = |p: &Exponent| -> Rational {
        p.entries()
            .iter()
            .zip(a)
            .map(|(&e, x)| x * Rational::from_integer(e.into()))
            .sum()
    };
    let at_v = val(v);
    poly.vertices.iter().all(|w| val(w) >= at_v)
}

#[derive(Clone, Copy, Debug)]
pub struct SubdivisionOptions {
    pub cone_budget: usize,
}

impl Default for SubdivisionOptions {
    fn default() -> Self {
        SubdivisionOptions { cone_budget: 20_000 }
    }
}

pub fn smooth_subdivision(coarse: &Fan) -> Result<Fan> {
    smooth_subdivision_with(coarse, SubdivisionOptions::default())
}

pub fn smooth_subdivision_with(coarse: &Fan, opts: SubdivisionOptions) -> Result<Fan> {
    match coarse.dim {
        1 => Ok(Fan {
            dim: 1,
            rays: coarse.rays.clone(),
            maximal: coarse.maximal.clone(),
            parent: (0..coarse.maximal.len()).collect(),
        }),
        2 => subdivide_plane(coarse, opts),
        _ => subdivide_general(coarse, opts),
    }
}

/// Minimal regular refinement of a 2-D cone by the continued-fraction walk:
/// from `p`, the next ray is the lattice point `q` with `det(p, q) = 1` that
/// turns furthest toward `v` while staying inside the cone.
fn plane_cone_rays(p: &[i64], v: &[i64]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut p = p.to_vec();
    while det2(&p, v) > 1 {
        let (g, s, t) = ext_gcd(p[0], p[1]);
        debug_assert_eq!(g, 1);
        // det(p, q0) = p0*q1 - p1*q0 = 1 with q0 = (-t, s)
        let q0 = [-t, s];
        let dpv = det2(&p, v);
        let num = -det2(&q0, v);
        let k = num.div_euclid(dpv) + i64::from(num.rem_euclid(dpv) != 0);
        let q = vec![q0[0] + k * p[0], q0[1] + k * p[1]];
        out.push(q.clone());
        p = q;
    }
    out
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

fn subdivide_plane(coarse: &Fan, opts: SubdivisionOptions) -> Result<Fan> {
    let mut rays: Vec<Vec<i64>> = Vec::new();
    let mut maximal = Vec::new();
    let mut parent = Vec::new();
    // coarse rays are in circular order; walk the cones in that order
    let mut order: Vec<usize> = (0..coarse.maximal.len()).collect();
    order.sort_by_key(|&ci| coarse.maximal[ci].iter().min().copied());
    let ray_index = |r: &Vec<i64>, rays: &mut Vec<Vec<i64>>| -> usize {
        if let Some(i) = rays.iter().position(|x| x == r) {
            i
        } else {
            rays.push(r.clone());
            rays.len() - 1
        }
    };
    for ci in order {
        let c = &coarse.maximal[ci];
        let (mut a, mut b) = (coarse.rays[c[0]].clone(), coarse.rays[c[1]].clone());
        if det2(&a, &b) < 0 {
            std::mem::swap(&mut a, &mut b);
        }
        let mut chain = vec![a.clone()];
        chain.extend(plane_cone_rays(&a, &b));
        chain.push(b);
        for w in chain.windows(2) {
            let i = ray_index(&w[0], &mut rays);
            let j = ray_index(&w[1], &mut rays);
            maximal.push(vec![i, j]);
            parent.push(ci);
            if maximal.len() > opts.cone_budget {
                return Err(Error::ResourceLimit(format!(
                    "subdivision exceeded the budget of {} cones",
                    opts.cone_budget
                )));
            }
        }
    }
    Ok(Fan {
        dim: 2,
        rays,
        maximal,
        parent,
    })
}

/// Facets of a cone inside its own linear span, each as the subset of its rays.
fn cone_facets(gens: &[Vec<i64>], members: &[usize]) -> Vec<Vec<usize>> {
    let rows: Vec<Vec<i64>> = members.iter().map(|&m| gens[m].clone()).collect();
    let d = linalg::rank_i64(&rows);
    let mut basis = linalg::to_rational_rows(&rows);
    let piv = linalg::rref(&mut basis);
    basis.truncate(piv.len());
    let mut facets = BTreeSet::new();
    for sub in subsets(&(0..members.len()).collect::<Vec<_>>(), d - 1) {
        let sub_rows: Vec<Vec<i64>> = sub.iter().map(|&i| rows[i].clone()).collect();
        if linalg::rank_i64(&sub_rows) != d - 1 {
            continue;
        }
        // functional w = Σ c_k basis_k vanishing on the subset
        let cons: Vec<Vec<Rational>> = sub_rows
            .iter()
            .map(|s| {
                basis
                    .iter()
                    .map(|b| b.iter().zip(s).map(|(x, &y)| x * Rational::from_integer(y.into())).sum())
                    .collect()
            })
            .collect();
        let ns = linalg::nullspace(&cons, d);
        if ns.len() != 1 {
            continue;
        }
        let w: Vec<Rational> = (0..gens[0].len())
            .map(|j| basis.iter().zip(&ns[0]).map(|(b, c)| &b[j] * c).sum())
            .collect();
        let vals: Vec<Rational> = rows
            .iter()
            .map(|r| r.iter().zip(&w).map(|(&x, y)| y * Rational::from_integer(x.into())).sum())
            .collect();
        let pos = vals.iter().any(|v| v.is_positive());
        let neg = vals.iter().any(|v| v.is_negative());
        if pos && neg {
            continue;
        }
        let on: Vec<usize> = members
            .iter()
            .zip(&vals)
            .filter(|(_, v)| v.is_zero())
            .map(|(&m, _)| m)
            .collect();
        facets.insert(on);
    }
    facets.into_iter().collect()
}

/// Pulling triangulation with respect to the global ray order; compatible on
/// shared faces, so the result is a fan.
fn pull(gens: &[Vec<i64>], members: &[usize]) -> Vec<Vec<usize>> {
    let rows: Vec<Vec<i64>> = members.iter().map(|&m| gens[m].clone()).collect();
    let d = linalg::rank_i64(&rows);
    if members.len() == d {
        return vec![members.to_vec()];
    }
    let first = *members.iter().min().expect("nonempty cone");
    let mut out = Vec::new();
    for facet in cone_facets(gens, members) {
        if facet.contains(&first) {
            continue;
        }
        for mut s in pull(gens, &facet) {
            s.push(first);
            s.sort_unstable();
            out.push(s);
        }
    }
    out
}

/// Nonzero lattice point of the half-open fundamental parallelepiped with the
/// smallest coordinate sum (ties broken lexicographically), with its
/// barycentric coordinates.
fn parallelepiped_point(gens: &[Vec<i64>]) -> Option<(Vec<i64>, Vec<Rational>)> {
    let n = gens.len();
    let cone = Cone {
        generators: gens.to_vec(),
    };
    let bounds: Vec<i64> = (0..n).map(|j| gens.iter().map(|g| g[j]).sum()).collect();
    let mut best: Option<(i64, Vec<i64>, Vec<Rational>)> = None;
    let mut x = vec![0i64; n];
    loop {
        // advance odometer
        let mut j = n;
        loop {
            if j == 0 {
                return best.map(|(_, p, l)| (p, l));
            }
            j -= 1;
            x[j] += 1;
            if x[j] < bounds[j].max(1) {
                break;
            }
            x[j] = 0;
        }
        let s: i64 = x.iter().sum();
        if best.as_ref().is_some_and(|(bs, bp, _)| (s, &x) >= (*bs, bp)) {
            continue;
        }
        let w: Vec<Rational> = x.iter().map(|&v| Rational::from_integer(v.into())).collect();
        if let Some(l) = cone.coordinates(&w) {
            if l.iter().all(|c| !c.is_negative() && *c < Rational::from_integer(1.into())) {
                best = Some((s, x.clone(), l));
            }
        }
    }
}

fn subdivide_general(coarse: &Fan, opts: SubdivisionOptions) -> Result<Fan> {
    let mut rays = coarse.rays.clone();
    let mut cones: Vec<(Vec<usize>, usize)> = Vec::new();
    for (ci, c) in coarse.maximal.iter().enumerate() {
        for s in pull(&rays, c) {
            cones.push((s, ci));
        }
    }
    loop {
        cones.sort();
        if cones.len() > opts.cone_budget {
            return Err(Error::ResourceLimit(format!(
                "subdivision exceeded the budget of {} cones",
                opts.cone_budget
            )));
        }
        let target = cones.iter().find(|(c, _)| {
            let g: Vec<Vec<i64>> = c.iter().map(|&r| rays[r].clone()).collect();
            det_i64(&g).abs() != 1
        });
        let Some((target, _)) = target.cloned() else {
            break;
        };
        let gens: Vec<Vec<i64>> = target.iter().map(|&r| rays[r].clone()).collect();
        let (point, coords) = parallelepiped_point(&gens)
            .ok_or_else(|| Error::internal("non-unimodular cone without interior lattice point"))?;
        let tau: Vec<usize> = target
            .iter()
            .zip(&coords)
            .filter(|(_, c)| c.is_positive())
            .map(|(&r, _)| r)
            .collect();
        rays.push(point);
        let new_ray = rays.len() - 1;
        let mut next = Vec::with_capacity(cones.len() + tau.len());
        for (c, parent) in cones {
            if tau.iter().all(|t| c.contains(t)) {
                for t in &tau {
                    let mut s: Vec<usize> = c.iter().copied().filter(|r| r != t).collect();
                    s.push(new_ray);
                    s.sort_unstable();
                    next.push((s, parent));
                }
            } else {
                next.push((c, parent));
            }
        }
        cones = next;
    }
    let (maximal, parent): (Vec<_>, Vec<_>) = cones.into_iter().unzip();
    Ok(Fan {
        dim: coarse.dim,
        rays,
        maximal,
        parent,
    })
}

/// Reorders every maximal cone so that its generator matrix has determinant +1.
pub fn orient(fan: &mut Fan) -> Result<()> {
    for c in fan.maximal.iter_mut() {
        let g: Vec<Vec<i64>> = c.iter().map(|&r| fan.rays[r].clone()).collect();
        match det_i64(&g) {
            1 => {}
            -1 if c.len() >= 2 => c.swap(0, 1),
            d => return Err(Error::internal(format!("cone with determinant {d} is not unimodular"))),
        }
    }
    Ok(())
}

/// Full pipeline from the polyhedron to an oriented smooth fan.
pub fn resolve(poly: &NewtonPolyhedron, f: &SparsePolynomial, opts: SubdivisionOptions) -> Result<(Fan, Fan)> {
    let coarse = normal_fan(poly, f)?;
    let mut fine = smooth_subdivision_with(&coarse, opts)?;
    orient(&mut fine)?;
    Ok((coarse, fine))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FanCheck {
    pub covering: bool,
    pub refinement: bool,
    pub unimodular: bool,
    pub oriented: bool,
}

impl FanCheck {
    pub fn all(&self) -> bool {
        self.covering && self.refinement && self.unimodular && self.oriented
    }
}

/// Re-checks the fan invariants: covering by random positive points, the
/// refinement property against the dual fan, and unimodularity/orientation.
pub fn check_fan(poly: &NewtonPolyhedron, coarse: &Fan, fine: &Fan, samples: usize, seed: u64) -> FanCheck {
    let cones = fine.maximal_cones();
    let unimodular = cones.iter().all(|c| c.determinant().abs() == 1);
    let oriented = cones.iter().all(|c| c.determinant() == 1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut covering = true;
    for _ in 0..samples {
        let w: Vec<Rational> = (0..fine.dim)
            .map(|_| Rational::new(rng.gen_range(1..1000i64).into(), rng.gen_range(1..50i64).into()))
            .collect();
        let mut hits = 0;
        let mut boundary = false;
        for c in &cones {
            if let Some(l) = c.coordinates(&w) {
                if linalg::is_nonneg(&l) {
                    hits += 1;
                    boundary |= l.iter().any(Zero::is_zero);
                }
            }
        }
        if hits == 0 || (hits > 1 && !boundary) {
            covering = false;
        }
    }

    let coarse_vertex = |ci: usize| &poly.vertices[coarse.parent[ci]];
    let as_rat = |v: &[i64]| -> Vec<Rational> { v.iter().map(|&x| Rational::from_integer(x.into())).collect() };
    let refinement = fine.rays.iter().all(|r| {
        (0..coarse.maximal.len()).any(|ci| in_normal_cone(poly, coarse_vertex(ci), &as_rat(r)))
    }) && cones.iter().all(|c| {
        (0..coarse.maximal.len())
            .filter(|&ci| {
                c.generators
                    .iter()
                    .all(|g| in_normal_cone(poly, coarse_vertex(ci), &as_rat(g)))
            })
            .count()
            == 1
    });
    FanCheck {
        covering,
        refinement,
        unimodular,
        oriented,
    }
}

/// Per-chart data of the toric resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartData {
    pub cone: Cone,
    /// Index of the maximal cone in the smooth fan.
    pub index: usize,
    pub l_vector: Vec<i64>,
    pub norm_sums: Vec<i64>,
    pub f_sigma: SparsePolynomial,
    pub c0: Rational,
}

pub fn chart_data(fan: &Fan, index: usize, f: &SparsePolynomial, poly: &NewtonPolyhedron) -> Result<ChartData> {
    let cone = fan.cone(index);
    let l_vector = cone
        .generators
        .iter()
        .map(|a| poly.support_min(a))
        .collect::<Result<Vec<_>>>()?;
    let norm_sums = cone.generators.iter().map(|a| a.iter().sum()).collect();
    let pulled = f.monomial_pullback(&cone.generators)?;
    let exceptional = Exponent::new(l_vector.iter().map(|&l| l as u32).collect());
    let f_sigma = pulled.divide_by_monomial(&exceptional)?;
    let c0 = f_sigma.constant_term();
    if c0.is_zero() {
        return Err(Error::internal(format!(
            "chart {index} has a vanishing unit factor at the origin"
        )));
    }
    Ok(ChartData {
        cone,
        index,
        l_vector,
        norm_sums,
        f_sigma,
        c0,
    })
}

pub fn all_charts(fan: &Fan, f: &SparsePolynomial, poly: &NewtonPolyhedron) -> Result<Vec<ChartData>> {
    use rayon::prelude::*;
    (0..fan.maximal.len())
        .into_par_iter()
        .map(|i| chart_data(fan, i, f, poly))
        .collect()
}

pub fn ray_l(poly: &NewtonPolyhedron, ray: &[i64]) -> i64 {
    poly.support_min(ray).expect("fan rays are non-negative")
}

pub fn ray_norm(ray: &[i64]) -> i64 {
    ray.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::newton_polyhedron;
    use crate::rational::int;

    fn poly(dim: usize, terms: &[(&[u32], i64)]) -> SparsePolynomial {
        let t: Vec<(&[u32], i64, i64)> = terms.iter().map(|(e, c)| (*e, *c, 1)).collect();
        SparsePolynomial::from_int_terms(dim, &t).unwrap()
    }

    fn setup(f: &SparsePolynomial) -> (NewtonPolyhedron, Fan, Fan) {
        let p = newton_polyhedron(f).unwrap();
        let (c, s) = resolve(&p, f, SubdivisionOptions::default()).unwrap();
        (p, c, s)
    }

    #[test]
    fn dual_fan_of_x2_y4() {
        let f = poly(2, &[(&[2, 0], 1), (&[0, 4], 1)]);
        let p = newton_polyhedron(&f).unwrap();
        let fan = normal_fan(&p, &f).unwrap();
        assert_eq!(fan.rays, vec![vec![1, 0], vec![2, 1], vec![0, 1]]);
        let cones: BTreeSet<Vec<usize>> = fan.maximal.iter().cloned().collect();
        assert_eq!(cones, [vec![0, 1], vec![1, 2]].into_iter().collect());
        let fine = smooth_subdivision(&fan).unwrap();
        assert!(fine.rays.contains(&vec![1, 1]));
        assert_eq!(fine.maximal.len(), 3);
    }

    #[test]
    fn dual_fan_of_w1_is_already_smooth() {
        let f = poly(2, &[(&[4, 0], 1), (&[2, 2], 1), (&[0, 6], 1)]);
        let (p, coarse, fine) = setup(&f);
        assert_eq!(coarse.rays, vec![vec![1, 0], vec![2, 1], vec![1, 1], vec![0, 1]]);
        assert_eq!(fine.rays, coarse.rays);
        assert_eq!(fine.maximal.len(), 3);
        assert!(check_fan(&p, &coarse, &fine, 200, 7).all());
    }

    #[test]
    fn circle_fan() {
        let f = poly(2, &[(&[2, 0], 1), (&[0, 2], 1)]);
        let p = newton_polyhedron(&f).unwrap();
        assert_eq!(normal_fan(&p, &f).unwrap().rays, vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn cusp_subdivision() {
        let f = poly(2, &[(&[3, 0], 1), (&[0, 2], -1)]);
        let (p, coarse, fine) = setup(&f);
        assert_eq!(coarse.rays, vec![vec![1, 0], vec![2, 3], vec![0, 1]]);
        let mut added: Vec<Vec<i64>> = fine.rays.iter().filter(|r| !coarse.rays.contains(r)).cloned().collect();
        added.sort();
        assert_eq!(added, vec![vec![1, 1], vec![1, 2]]);
        assert!(check_fan(&p, &coarse, &fine, 500, 1).all());
    }

    #[test]
    fn hirzebruch_jung_walk() {
        assert_eq!(plane_cone_rays(&[1, 0], &[2, 3]), vec![vec![1, 1]]);
        assert_eq!(plane_cone_rays(&[2, 3], &[0, 1]), vec![vec![1, 2]]);
        assert_eq!(plane_cone_rays(&[1, 0], &[1, 5]), vec![vec![1, 1], vec![1, 2], vec![1, 3], vec![1, 4]]);
        assert_eq!(plane_cone_rays(&[1, 0], &[5, 1]), Vec::<Vec<i64>>::new());
    }

    #[test]
    fn three_dimensional_resolution() {
        let f = poly(3, &[(&[2, 0, 0], 1), (&[0, 3, 0], 1), (&[0, 0, 5], 1), (&[1, 1, 1], 1)]);
        let (p, coarse, fine) = setup(&f);
        let check = check_fan(&p, &coarse, &fine, 300, 3);
        assert!(check.all(), "{check:?}");
        for i in 0..fine.maximal.len() {
            let cd = chart_data(&fine, i, &f, &p).unwrap();
            let mono = SparsePolynomial::monomial(
                Exponent::new(cd.l_vector.iter().map(|&l| l as u32).collect()),
                int(1),
            );
            assert_eq!(&cd.f_sigma * &mono, f.monomial_pullback(&cd.cone.generators).unwrap());
        }
    }

    #[test]
    fn w1_chart() {
        let f = poly(2, &[(&[4, 0], 1), (&[2, 2], 1), (&[0, 6], 1)]);
        let (p, _, fine) = setup(&f);
        let idx = fine.maximal_cones().iter().position(|c| c.generators == vec![vec![2, 1], vec![1, 1]]).unwrap();
        let cd = chart_data(&fine, idx, &f, &p).unwrap();
        assert_eq!(cd.l_vector, vec![6, 4]);
        assert_eq!(cd.norm_sums, vec![3, 2]);
        assert_eq!(cd.f_sigma, poly(2, &[(&[0, 0], 1), (&[2, 0], 1), (&[0, 2], 1)]));
        assert_eq!(cd.c0, int(1));
    }

    #[test]
    fn one_variable_chart() {
        for k in [2u32, 3] {
            let f = poly(1, &[(&[k], 1)]);
            let (p, _, fine) = setup(&f);
            let cd = chart_data(&fine, 0, &f, &p).unwrap();
            assert_eq!(cd.l_vector, vec![k as i64]);
            assert_eq!(cd.c0, int(1));
        }
    }

    #[test]
    fn non_convenient_rejected() {
        let f = poly(2, &[(&[2, 1], 1), (&[0, 3], 1)]);
        let p = newton_polyhedron(&f).unwrap();
        let err = normal_fan(&p, &f).unwrap_err();
        assert!(matches!(err, Error::Precondition { .. }), "{err}");
        assert!(err.to_string().contains('1'));
    }

    #[test]
    fn budget_is_enforced() {
        let f = poly(2, &[(&[1, 0], 1), (&[0, 40], 1)]);
        let p = newton_polyhedron(&f).unwrap();
        let coarse = normal_fan(&p, &f).unwrap();
        let r = smooth_subdivision_with(&coarse, SubdivisionOptions { cone_budget: 5 });
        assert!(matches!(r, Err(Error::ResourceLimit(_))));
    }
}
