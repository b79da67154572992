//! Small curated triangulations.

use crate::simplicial::{OrientedComplex, SignedSimplex};

/// Boundary of the 3-simplex, a 4-vertex 2-sphere.
pub fn tetrahedron_boundary() -> OrientedComplex {
    boundary_of_simplex(3)
}

/// Boundary of the 4-simplex, a 5-vertex 3-sphere.
pub fn sphere3() -> OrientedComplex {
    boundary_of_simplex(4)
}

fn boundary_of_simplex(n: usize) -> OrientedComplex {
    // (-1)^n times the usual boundary, so the first facet in sorted order is +1
    let tops: Vec<SignedSimplex> = (0..=n)
        .map(|i| {
            let face = (0..=n).filter(|&v| v != i).collect();
            SignedSimplex::new(face, if (i + n).is_multiple_of(2) { 1 } else { -1 })
        })
        .collect();
    OrientedComplex::build(&tops).expect("simplex boundary is a closed oriented manifold")
}

/// Octahedron boundary. Vertex `2k` is `+e_k` and `2k+1` is `-e_k`, so
/// `v ^ 1` is the antipode of `v`. Oriented by the outward normal.
pub fn octahedron() -> OrientedComplex {
    let mut tops = Vec::new();
    for a in 0..2 {
        for b in 2..4 {
            for c in 4..6 {
                let sign = [a, b, c].iter().map(|v| if v % 2 == 0 { 1 } else { -1 }).product();
                tops.push(SignedSimplex::new(vec![a, b, c], sign));
            }
        }
    }
    OrientedComplex::build(&tops).expect("octahedron is a closed oriented surface")
}

/// Antipodal vertex map of [`octahedron`].
pub fn octahedron_antipode() -> Vec<usize> {
    (0..6).map(|v| v ^ 1).collect()
}

/// The 7-vertex Möbius–Kantor torus: triangles `(i, i+1, i+3)` and
/// `(i, i+3, i+2)` mod 7, all positively oriented as listed.
pub fn torus7() -> OrientedComplex {
    let tops: Vec<SignedSimplex> = (0..7)
        .flat_map(|i| {
            [
                SignedSimplex::positive(vec![i, (i + 1) % 7, (i + 3) % 7]),
                SignedSimplex::positive(vec![i, (i + 3) % 7, (i + 2) % 7]),
            ]
        })
        .collect();
    OrientedComplex::build(&tops).expect("7-vertex torus is a closed oriented surface")
}

/// Vertex map `i -> k*i mod 7` on [`torus7`]; simplicial for every `k` coprime to 7.
pub fn torus7_multiplier(k: usize) -> Vec<usize> {
    (0..7).map(|i| (k * i) % 7).collect()
}
