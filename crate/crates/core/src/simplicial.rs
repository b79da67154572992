//! Finite oriented simplicial complexes modelling closed oriented manifolds.
//!
//! Vertices are `0..vertex_count` with their natural order. Every simplex is
//! stored as a strictly increasing vertex tuple; all sign conventions (faces,
//! cup products, pullbacks) derive from that order.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{rat, Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
    #[error("invalid simplex {simplex:?}: {reason}")]
    InvalidSimplex { simplex: Vec<usize>, reason: String },
    #[error("not a closed manifold: face {face:?} has {cofaces} top-dimensional cofaces")]
    NotClosedManifold { face: Vec<usize>, cofaces: usize },
    #[error("not orientable with the given signs: boundary of the signed top chain is non-zero at {face:?}")]
    NotOrientable { face: Vec<usize> },
    #[error("degree {degree} out of range 1..={dimension}")]
    DegreeOutOfRange { degree: usize, dimension: usize },
    #[error("vertex map is not simplicial: {simplex:?} maps onto {image:?}, which is not a simplex of the target")]
    NotSimplicial { simplex: Vec<usize>, image: Vec<usize> },
    #[error("vertex map has {got} entries, source has {expected} vertices")]
    VertexCountMismatch { expected: usize, got: usize },
}

/// A top-dimensional simplex with an orientation sign. The vertices may be
/// listed in any order; the sign is relative to that listing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedSimplex {
    pub vertices: Vec<usize>,
    pub sign: i8,
}

impl SignedSimplex {
    pub fn new(vertices: Vec<usize>, sign: i8) -> Self {
        Self { vertices, sign }
    }

    pub fn positive(vertices: Vec<usize>) -> Self {
        Self { vertices, sign: 1 }
    }
}

/// Sorts `v` in place and returns the parity of the sorting permutation.
pub(crate) fn sort_with_parity(v: &mut [usize]) -> i8 {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedComplex {
    vertex_count: usize,
    dimension: usize,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    top_orientation: Vec<i8>,
}

impl OrientedComplex {
    /// Builds the complex spanned by the given signed top simplices and
    /// certifies that it is a closed oriented pseudo-manifold.
    pub fn build(top_simplices: &[SignedSimplex]) -> Result<Self, SimplicialError> {
        let first = top_simplices.first().ok_or_else(|| SimplicialError::InvalidSimplex {
            simplex: vec![],
            reason: "no simplices given".into(),
        })?;
        let dimension = first.vertices.len().saturating_sub(1);
        if dimension == 0 {
            return Err(SimplicialError::InvalidSimplex {
                simplex: first.vertices.clone(),
                reason: "top simplices must have dimension at least 1".into(),
            });
        }

        let mut tops: Vec<(Vec<usize>, i8)> = Vec::with_capacity(top_simplices.len());
        for s in top_simplices {
            if s.vertices.len() != dimension + 1 {
                return Err(SimplicialError::InvalidSimplex {
                    simplex: s.vertices.clone(),
                    reason: format!("expected {} vertices", dimension + 1),
                });
            }
            if s.sign != 1 && s.sign != -1 {
                return Err(SimplicialError::InvalidSimplex {
                    simplex: s.vertices.clone(),
                    reason: format!("sign must be +1 or -1, got {}", s.sign),
                });
            }
            let mut v = s.vertices.clone();
            let parity = sort_with_parity(&mut v);
            if v.windows(2).any(|w| w[0] == w[1]) {
                return Err(SimplicialError::InvalidSimplex {
                    simplex: s.vertices.clone(),
                    reason: "repeated vertex".into(),
                });
            }
            tops.push((v, parity * s.sign));
        }
        tops.sort();
        if let Some(w) = tops.windows(2).find(|w| w[0].0 == w[1].0) {
            // the same simplex twice: every facet of it has two cofaces, but the
            // result is not a simplicial complex
            return Err(SimplicialError::NotClosedManifold { face: w[0].0.clone(), cofaces: 2 });
        }

        let vertex_count = tops.iter().flat_map(|(v, _)| v.iter()).max().map_or(0, |&m| m + 1);
        let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); dimension + 1];
        for (v, _) in &tops {
            for (q, set) in sets.iter_mut().enumerate() {
                set.extend(combinations(v, q + 1));
            }
        }
        if sets[0].len() != vertex_count {
            let used: BTreeSet<usize> = sets[0].iter().map(|v| v[0]).collect();
            let missing = (0..vertex_count).find(|i| !used.contains(i)).unwrap_or(0);
            return Err(SimplicialError::InvalidSimplex {
                simplex: vec![missing],
                reason: "vertex labels must be 0..n-1 with every vertex used".into(),
            });
        }

        let simplices: Vec<Vec<Vec<usize>>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = simplices
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let top_orientation = tops.iter().map(|(_, s)| *s).collect();
        let complex = Self { vertex_count, dimension, simplices, index, top_orientation };

        // each facet needs exactly two cofaces
        let mut cofaces = vec![0usize; complex.simplices[dimension - 1].len()];
        for top in &complex.simplices[dimension] {
            for i in 0..=dimension {
                let face = drop_vertex(top, i);
                cofaces[complex.index[dimension - 1][&face]] += 1;
            }
        }
        if let Some((i, &c)) = cofaces.iter().enumerate().find(|(_, &c)| c != 2) {
            return Err(SimplicialError::NotClosedManifold {
                face: complex.simplices[dimension - 1][i].clone(),
                cofaces: c,
            });
        }

        let boundary = complex.boundary_matrix(dimension)?.mul_vec(&complex.fundamental_cycle());
        if let Some(i) = boundary.iter().position(|b| !b.is_zero()) {
            return Err(SimplicialError::NotOrientable {
                face: complex.simplices[dimension - 1][i].clone(),
            });
        }
        Ok(complex)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Sorted list of `q`-simplices.
    pub fn simplices(&self, q: usize) -> &[Vec<usize>] {
        self.simplices.get(q).map_or(&[], Vec::as_slice)
    }

    pub fn simplex_count(&self, q: usize) -> usize {
        self.simplices(q).len()
    }

    pub fn simplex_index(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex.len().checked_sub(1)?)?.get(simplex).copied()
    }

    pub fn top_orientation(&self) -> &[i8] {
        &self.top_orientation
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dimension)
            .map(|q| {
                let n = self.simplex_count(q) as i64;
                if q % 2 == 0 { n } else { -n }
            })
            .sum()
    }

    /// Matrix of the boundary map `C_q -> C_{q-1}` in the sorted simplex bases.
    pub fn boundary_matrix(&self, q: usize) -> Result<RationalMatrix, SimplicialError> {
        if q == 0 || q > self.dimension {
            return Err(SimplicialError::DegreeOutOfRange { degree: q, dimension: self.dimension });
        }
        let mut m = RationalMatrix::zeros(self.simplex_count(q - 1), self.simplex_count(q));
        for (j, s) in self.simplices[q].iter().enumerate() {
            for i in 0..=q {
                let row = self.index[q - 1][&drop_vertex(s, i)];
                m[(row, j)] = rat(if i % 2 == 0 { 1 } else { -1 });
            }
        }
        Ok(m)
    }

    /// Coboundary `C^q -> C^{q+1}`: the transpose of the boundary `∂_{q+1}`.
    /// For `q = dimension` this is the zero map into the zero space.
    pub fn coboundary_matrix(&self, q: usize) -> RationalMatrix {
        if q >= self.dimension {
            RationalMatrix::zeros(0, self.simplex_count(q))
        } else {
            self.boundary_matrix(q + 1).expect("degree in range").transpose()
        }
    }

    /// Signed sum of the top simplices in sorted order.
    pub fn fundamental_cycle(&self) -> Vec<Rational> {
        self.top_orientation.iter().map(|&s| rat(i64::from(s))).collect()
    }

    /// The same complex with the opposite orientation.
    pub fn reversed(&self) -> Self {
        let mut c = self.clone();
        c.top_orientation.iter_mut().for_each(|s| *s = -*s);
        c
    }

    /// The signed top simplices in a form accepted by [`OrientedComplex::build`].
    pub fn signed_top_simplices(&self) -> Vec<SignedSimplex> {
        self.simplices[self.dimension]
            .iter()
            .zip(&self.top_orientation)
            .map(|(v, &s)| SignedSimplex::new(v.clone(), s))
            .collect()
    }
}

fn drop_vertex(s: &[usize], i: usize) -> Vec<usize> {
    s.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect()
}

fn combinations(v: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(v: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..v.len() {
            cur.push(v[i]);
            rec(v, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(v, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// A vertex map between two complexes.
#[derive(Debug, Clone)]
pub struct SimplicialMapSpec {
    pub source: Arc<OrientedComplex>,
    pub target: Arc<OrientedComplex>,
    pub vertex_image: Vec<usize>,
}

impl SimplicialMapSpec {
    pub fn new(source: Arc<OrientedComplex>, target: Arc<OrientedComplex>, vertex_image: Vec<usize>) -> Self {
        Self { source, target, vertex_image }
    }

    pub fn identity(complex: Arc<OrientedComplex>) -> Self {
        let n = complex.vertex_count();
        Self::new(complex.clone(), complex, (0..n).collect())
    }

    /// Image of an ordered simplex as `(sign, target index)`, or `None` when the
    /// image is degenerate.
    pub fn image_of(&self, simplex: &[usize]) -> Option<(i8, usize)> {
        let mut img: Vec<usize> = simplex.iter().map(|&v| self.vertex_image[v]).collect();
        let sign = sort_with_parity(&mut img);
        if img.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        self.target.simplex_index(&img).map(|i| (sign, i))
    }

    /// Matrix of the cochain pullback `C^q(target) -> C^q(source)`.
    pub fn cochain_map(&self, q: usize) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.source.simplex_count(q), self.target.simplex_count(q));
        for (i, s) in self.source.simplices(q).iter().enumerate() {
            if let Some((sign, j)) = self.image_of(s) {
                m[(i, j)] = rat(i64::from(sign));
            }
        }
        m
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMapSpec) -> SimplicialMapSpec {
        assert!(Arc::ptr_eq(&self.target, &other.source) || *self.target == *other.source);
        SimplicialMapSpec::new(
            self.source.clone(),
            other.target.clone(),
            self.vertex_image.iter().map(|&v| other.vertex_image[v]).collect(),
        )
    }
}

/// Checks that every source simplex spans a (possibly lower-dimensional)
/// target simplex.
pub fn validate_simplicial_map(s: SimplicialMapSpec) -> Result<SimplicialMapSpec, SimplicialError> {
    if s.vertex_image.len() != s.source.vertex_count() {
        return Err(SimplicialError::VertexCountMismatch {
            expected: s.source.vertex_count(),
            got: s.vertex_image.len(),
        });
    }
    // faces of a top simplex map into faces of its image, so the tops suffice
    for top in s.source.simplices(s.source.dimension()) {
        let image: BTreeSet<usize> = top.iter().map(|&v| s.vertex_image[v]).collect();
        let image: Vec<usize> = image.into_iter().collect();
        if s.target.simplex_index(&image).is_none() {
            return Err(SimplicialError::NotSimplicial { simplex: top.clone(), image });
        }
    }
    Ok(s)
}
