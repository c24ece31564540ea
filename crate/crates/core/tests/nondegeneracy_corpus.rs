//! Exact non-degeneracy verdicts against a brute-force grid scan of every compact face.

use zetascope::lattice_poly::SparsePolynomial;
use zetascope::newton::{gamma_part, newton_polyhedron};
use zetascope::nondegeneracy::{check_nondegenerate, grid_scan_degenerate, FaceStatus};

type Terms = &'static [(&'static [u32], i64, i64)];

const NONDEGENERATE: [(&str, Terms); 13] = [
    ("x^2 + y^2", &[(&[2, 0], 1, 1), (&[0, 2], 1, 1)]),
    ("x^2 + y^3", &[(&[2, 0], 1, 1), (&[0, 3], 1, 1)]),
    ("x^3 - y^2", &[(&[3, 0], 1, 1), (&[0, 2], -1, 1)]),
    ("x^4 + x^2 y^2 + y^6", &[(&[4, 0], 1, 1), (&[2, 2], 1, 1), (&[0, 6], 1, 1)]),
    ("x^2 + y^4", &[(&[2, 0], 1, 1), (&[0, 4], 1, 1)]),
    ("x^2 - y^2", &[(&[2, 0], 1, 1), (&[0, 2], -1, 1)]),
    ("x^3 + y^3", &[(&[3, 0], 1, 1), (&[0, 3], 1, 1)]),
    ("x^4 + y^4 + x^2 y", &[(&[4, 0], 1, 1), (&[0, 4], 1, 1), (&[2, 1], 1, 1)]),
    ("x^2 y + x^5 + y^5", &[(&[2, 1], 1, 1), (&[5, 0], 1, 1), (&[0, 5], 1, 1)]),
    ("x^3 + x y + y^3", &[(&[3, 0], 1, 1), (&[1, 1], 1, 1), (&[0, 3], 1, 1)]),
    ("x^2 + 3 x y + y^2", &[(&[2, 0], 1, 1), (&[1, 1], 3, 1), (&[0, 2], 1, 1)]),
    ("x^2 + x y^2 + y^4", &[(&[2, 0], 1, 1), (&[1, 2], 1, 1), (&[0, 4], 1, 1)]),
    ("x^5 + y^3", &[(&[5, 0], 1, 1), (&[0, 3], 1, 1)]),
];

const DEGENERATE: [(&str, Terms); 7] = [
    ("(x + y)^2", &[(&[2, 0], 1, 1), (&[1, 1], 2, 1), (&[0, 2], 1, 1)]),
    ("(x - 2y)^2", &[(&[2, 0], 1, 1), (&[1, 1], -4, 1), (&[0, 2], 4, 1)]),
    ("(x^2 - y)^2", &[(&[4, 0], 1, 1), (&[2, 1], -2, 1), (&[0, 2], 1, 1)]),
    ("(x^2 - y^2)^2", &[(&[4, 0], 1, 1), (&[2, 2], -2, 1), (&[0, 4], 1, 1)]),
    ("(2x - y)^2 + y^5", &[(&[2, 0], 4, 1), (&[1, 1], -4, 1), (&[0, 2], 1, 1), (&[0, 5], 1, 1)]),
    ("(x^2 - y^3)^2", &[(&[4, 0], 1, 1), (&[2, 3], -2, 1), (&[0, 6], 1, 1)]),
    ("x^3 + (x - y)^2", &[(&[3, 0], 1, 1), (&[2, 0], 1, 1), (&[1, 1], -2, 1), (&[0, 2], 1, 1)]),
];

/// Returns whether the exact verdict called `f` degenerate, after checking
/// every compact face against the grid scan.
fn agree(name: &str, terms: Terms) -> bool {
    let f = SparsePolynomial::from_int_terms(2, terms).expect("polynomial");
    let poly = newton_polyhedron(&f).expect("polyhedron");
    let verdict = check_nondegenerate(&f, &poly, 64, 0);
    assert_eq!(verdict.faces.len(), poly.compact_faces.len(), "{name}");
    for fv in &verdict.faces {
        let face = &poly.compact_faces[fv.face];
        let g = gamma_part(&f, &poly, face).expect("γ-part");
        let scanned = grid_scan_degenerate(&g, 1.0 / 200.0, 1e-6);
        let exact = match &fv.status {
            FaceStatus::Proven => false,
            FaceStatus::Degenerate(_) => true,
            FaceStatus::NoWitnessFound { .. } => panic!("{name}: face {} of a plane curve left undecided", fv.face),
        };
        assert_eq!(exact, scanned, "{name}: face {} ({g}) exact {exact}, grid {scanned}", fv.face);
    }
    verdict.is_degenerate()
}

#[test]
fn nondegenerate_corpus_agrees_with_grid_scan() {
    for (name, terms) in NONDEGENERATE {
        assert!(!agree(name, terms), "{name} reported degenerate");
    }
}

#[test]
fn degenerate_corpus_agrees_with_grid_scan() {
    for (name, terms) in DEGENERATE {
        assert!(agree(name, terms), "{name} reported non-degenerate");
    }
}
