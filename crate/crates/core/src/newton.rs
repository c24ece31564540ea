//! Newton polyhedron `conv(supp f) + R₊ⁿ`, its facets and compact faces.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lattice_poly::{Exponent, SparsePolynomial};
use crate::linalg::{self, dot};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    /// Primitive inner normal with non-negative entries.
    pub normal: Vec<i64>,
    /// `min ⟨normal, ·⟩` over the polyhedron.
    pub offset: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    /// Indices into [`NewtonPolyhedron::vertices`].
    pub vertices: Vec<usize>,
    /// Indices into [`NewtonPolyhedron::facets`] of every facet containing the face.
    pub facets: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    pub dim: usize,
    /// Vertices in decreasing lexicographic order.
    pub vertices: Vec<Exponent>,
    pub facets: Vec<Facet>,
    /// Compact faces of every dimension, vertices first, then by vertex list.
    pub compact_faces: Vec<Face>,
}

/// Support points not dominated componentwise by another support point.
fn minimal_points(support: &[Exponent]) -> Vec<Vec<i64>> {
    support
        .iter()
        .filter(|s| !support.iter().any(|t| t != *s && t.divides(s)))
        .map(Exponent::as_i64)
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Facets are found by enumerating hyperplanes spanned by `p` minimal support
/// points together with `n - p` coordinate directions (the recession cone), and
/// keeping those that support every point. Exponential in `n` but exact, and
/// the ambient dimension is small.
fn enumerate_facets(points: &[Vec<i64>], n: usize) -> Vec<Facet> {
    let mut found: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for p in 1..=n.min(points.len()) {
        for subset in combinations(points.len(), p) {
            for dirs in combinations(n, n - p) {
                let base = &points[subset[0]];
                let mut rows: Vec<Vec<i64>> = subset[1..]
                    .iter()
                    .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
                    .collect();
                for &d in &dirs {
                    let mut e = vec![0; n];
                    e[d] = 1;
                    rows.push(e);
                }
                let ns = linalg::nullspace(&linalg::to_rational_rows(&rows), n);
                if ns.len() != 1 {
                    continue;
                }
                let mut a = linalg::primitive(&ns[0]);
                if a.iter().all(|&x| x <= 0) {
                    a.iter_mut().for_each(|x| *x = -*x);
                }
                if a.iter().any(|&x| x < 0) {
                    continue;
                }
                let l = dot(&a, base);
                if points.iter().all(|s| dot(&a, s) >= l) {
                    found.insert(a, l);
                }
            }
        }
    }
    let mut facets: Vec<Facet> = found
        .into_iter()
        .map(|(normal, offset)| Facet { normal, offset })
        .collect();
    facets.sort_by(|x, y| y.normal.cmp(&x.normal));
    facets
}

fn affine_dim(points: &[Vec<i64>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let rows: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    linalg::rank_i64(&rows)
}

pub fn newton_polyhedron(f: &SparsePolynomial) -> Result<NewtonPolyhedron> {
    if f.is_zero() {
        return Err(Error::input("the zero polynomial has no Newton polyhedron"));
    }
    let n = f.dim();
    let points = minimal_points(&f.support());
    let facets = enumerate_facets(&points, n);

    let tight = |p: &[i64], fi: usize| dot(&facets[fi].normal, p) == facets[fi].offset;
    let mut vertices: Vec<Vec<i64>> = points
        .iter()
        .filter(|p| {
            let normals: Vec<Vec<i64>> = (0..facets.len())
                .filter(|&fi| tight(p, fi))
                .map(|fi| facets[fi].normal.clone())
                .collect();
            linalg::rank_i64(&normals) == n
        })
        .cloned()
        .collect();
    vertices.sort_by(|a, b| b.cmp(a));

    // Vertex sets of faces are the intersections of facet vertex sets.
    let facet_sets: Vec<BTreeSet<usize>> = (0..facets.len())
        .map(|fi| (0..vertices.len()).filter(|&v| tight(&vertices[v], fi)).collect())
        .collect();
    let mut sets: BTreeSet<BTreeSet<usize>> = facet_sets.iter().filter(|s| !s.is_empty()).cloned().collect();
    loop {
        let current: Vec<BTreeSet<usize>> = sets.iter().cloned().collect();
        let mut added = false;
        for a in &current {
            for b in &current {
                let c: BTreeSet<usize> = a.intersection(b).copied().collect();
                if !c.is_empty() && sets.insert(c) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }

    let mut compact_faces = Vec::new();
    for vs in sets {
        let on: Vec<usize> = (0..facets.len())
            .filter(|&fi| vs.iter().all(|&v| tight(&vertices[v], fi)))
            .collect();
        let mut sum = vec![0i64; n];
        for &fi in &on {
            for (s, a) in sum.iter_mut().zip(&facets[fi].normal) {
                *s += a;
            }
        }
        if sum.iter().all(|&s| s > 0) {
            let pts: Vec<Vec<i64>> = vs.iter().map(|&v| vertices[v].clone()).collect();
            compact_faces.push(Face {
                dim: affine_dim(&pts),
                vertices: vs.into_iter().collect(),
                facets: on,
            });
        }
    }
    compact_faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.cmp(&b.vertices)));

    Ok(NewtonPolyhedron {
        dim: n,
        vertices: vertices
            .into_iter()
            .map(|v| Exponent::new(v.into_iter().map(|x| x as u32).collect()))
            .collect(),
        facets,
        compact_faces,
    })
}

impl NewtonPolyhedron {
    /// `l(a) = min ⟨a, α⟩` over the polyhedron, attained at a vertex.
    pub fn support_min(&self, a: &[i64]) -> Result<i64> {
        if a.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: a.len(),
            });
        }
        if a.iter().any(|&x| x < 0) {
            return Err(Error::input("support function needs a non-negative direction"));
        }
        Ok(self.vertices.iter().map(|v| v.dot(a)).min().unwrap_or(0))
    }

    /// Whether `α` lies on the face (all its facet equations are tight).
    pub fn on_face(&self, face: &Face, alpha: &Exponent) -> bool {
        face.facets
            .iter()
            .all(|&fi| alpha.dot(&self.facets[fi].normal) == self.facets[fi].offset)
    }

    /// A strictly positive functional whose minimum on the polyhedron is the face.
    pub fn face_functional(&self, face: &Face) -> Vec<i64> {
        let mut w = vec![0i64; self.dim];
        for &fi in &face.facets {
            for (s, a) in w.iter_mut().zip(&self.facets[fi].normal) {
                *s += a;
            }
        }
        w
    }

    pub fn face_vertices(&self, face: &Face) -> Vec<&Exponent> {
        face.vertices.iter().map(|&i| &self.vertices[i]).collect()
    }
}

/// The γ-part: the terms of `f` whose exponents lie on the compact face.
pub fn gamma_part(f: &SparsePolynomial, poly: &NewtonPolyhedron, face: &Face) -> Result<SparsePolynomial> {
    if !poly.compact_faces.contains(face) {
        return Err(Error::input("face does not belong to this Newton polyhedron"));
    }
    SparsePolynomial::from_terms(
        f.dim(),
        f.terms()
            .filter(|(e, _)| poly.on_face(face, e))
            .map(|(e, c)| (e.clone(), c.clone())),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convenience {
    pub convenient: bool,
    /// Per axis, the lowest pure power of that variable in the support.
    pub witnesses: Vec<Option<Exponent>>,
}

impl Convenience {
    pub fn failing_axes(&self) -> Vec<usize> {
        self.witnesses
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_none())
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn is_convenient(f: &SparsePolynomial) -> Convenience {
    let n = f.dim();
    let witnesses: Vec<Option<Exponent>> = (0..n)
        .map(|i| {
            f.terms()
                .map(|(e, _)| e)
                .filter(|e| {
                    e.entries()[i] > 0 && e.entries().iter().enumerate().all(|(j, &x)| j == i || x == 0)
                })
                .min_by_key(|e| e.entries()[i])
                .cloned()
        })
        .collect();
    Convenience {
        convenient: witnesses.iter().all(Option::is_some),
        witnesses,
    }
}

/// Whether the rational point `p` satisfies every facet inequality.
pub fn contains_point(poly: &NewtonPolyhedron, p: &[Rational]) -> bool {
    poly.facets.iter().all(|f| {
        let v: Rational = f
            .normal
            .iter()
            .zip(p)
            .map(|(&a, x)| x * Rational::from_integer(a.into()))
            .sum();
        !(v - Rational::from_integer(f.offset.into())).is_negative()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(dim: usize, terms: &[(&[u32], i64)]) -> SparsePolynomial {
        let t: Vec<(&[u32], i64, i64)> = terms.iter().map(|(e, c)| (*e, *c, 1)).collect();
        SparsePolynomial::from_int_terms(dim, &t).unwrap()
    }

    fn normals(p: &NewtonPolyhedron) -> Vec<(Vec<i64>, i64)> {
        let mut v: Vec<_> = p.facets.iter().map(|f| (f.normal.clone(), f.offset)).collect();
        v.sort();
        v
    }

    #[test]
    fn cusp() {
        let p = newton_polyhedron(&poly(2, &[(&[3, 0], 1), (&[0, 2], -1)])).unwrap();
        assert_eq!(p.vertices, vec![Exponent::new(vec![3, 0]), Exponent::new(vec![0, 2])]);
        assert_eq!(normals(&p), vec![(vec![0, 1], 0), (vec![1, 0], 0), (vec![2, 3], 6)]);
        assert_eq!(p.support_min(&[2, 3]).unwrap(), 6);
    }

    #[test]
    fn w1_faces() {
        let f = poly(2, &[(&[4, 0], 1), (&[2, 2], 1), (&[0, 6], 1)]);
        let p = newton_polyhedron(&f).unwrap();
        assert_eq!(p.vertices.len(), 3);
        assert_eq!(p.vertices[1], Exponent::new(vec![2, 2]));
        assert_eq!(
            normals(&p),
            vec![(vec![0, 1], 0), (vec![1, 0], 0), (vec![1, 1], 4), (vec![2, 1], 6)]
        );
        let edges: Vec<&Face> = p.compact_faces.iter().filter(|f| f.dim == 1).collect();
        assert_eq!(edges.len(), 2);
        assert_eq!(p.compact_faces.iter().filter(|f| f.dim == 0).count(), 3);
        let edge = p
            .compact_faces
            .iter()
            .find(|f| f.dim == 1 && f.vertices == vec![0, 1])
            .unwrap();
        let g = gamma_part(&f, &p, edge).unwrap();
        assert_eq!(g, poly(2, &[(&[4, 0], 1), (&[2, 2], 1)]));
        assert_eq!(p.support_min(&[1, 1]).unwrap(), 4);
        assert_eq!(p.support_min(&[0, 0]).unwrap(), 0);
        assert!(p.support_min(&[1, -1]).is_err());
    }

    #[test]
    fn single_variable() {
        let p = newton_polyhedron(&poly(1, &[(&[1], 1)])).unwrap();
        assert_eq!(p.vertices, vec![Exponent::new(vec![1])]);
        assert_eq!(normals(&p), vec![(vec![1], 1)]);
    }

    #[test]
    fn dominated_points_are_ignored() {
        let p = newton_polyhedron(&poly(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[2, 2], 5), (&[1, 1], 1)])).unwrap();
        assert_eq!(p.vertices.len(), 2); // (1,1) sits inside the edge
        assert_eq!(p.compact_faces.iter().filter(|f| f.dim == 1).count(), 1);
    }

    #[test]
    fn three_dimensional_simplex() {
        let f = poly(3, &[(&[2, 0, 0], 1), (&[0, 3, 0], 1), (&[0, 0, 6], 1)]);
        let p = newton_polyhedron(&f).unwrap();
        assert!(p.facets.iter().any(|fc| fc.normal == vec![3, 2, 1] && fc.offset == 6));
        let dims: Vec<usize> = p.compact_faces.iter().map(|f| f.dim).collect();
        assert_eq!(dims, vec![0, 0, 0, 1, 1, 1, 2]);
    }

    #[test]
    fn convenience() {
        let c = is_convenient(&poly(2, &[(&[4, 0], 1), (&[2, 2], 1), (&[0, 6], 1)]));
        assert!(c.convenient);
        assert_eq!(c.witnesses[0], Some(Exponent::new(vec![4, 0])));
        assert_eq!(c.witnesses[1], Some(Exponent::new(vec![0, 6])));
        let c = is_convenient(&poly(2, &[(&[2, 1], 1)]));
        assert_eq!(c.failing_axes(), vec![0, 1]);
        assert!(is_convenient(&poly(1, &[(&[2], 1)])).convenient);
    }
}
