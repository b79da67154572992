//! Rational simplicial cohomology: cocycle bases, cup-product pairings on
//! the fundamental cycle, and induced maps.

use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{kernel_basis, rref, solve, Rational, RationalMatrix};
use crate::simplicial::{validate_simplicial_map, OrientedComplex, SimplicialError, SimplicialMapSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("degree {degree} out of range 0..={dimension}")]
    DegreeOutOfRange { degree: usize, dimension: usize },
    #[error("degenerate Poincaré pairing in degree {degree}: rank {rank}, betti numbers {betti:?}")]
    DegeneratePairing { degree: usize, rank: usize, betti: (usize, usize) },
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// Cocycle representatives of a basis of `H^q`.
#[derive(Debug, Clone)]
pub struct CohomologyBasis {
    pub complex: Arc<OrientedComplex>,
    pub degree: usize,
    /// Columns are cocycles in the sorted simplex basis of `C^q`.
    pub basis_cocycles: RationalMatrix,
    /// Columns span the coboundaries `im δ_{q-1}`.
    pub coboundaries: RationalMatrix,
    pub betti: usize,
}

impl CohomologyBasis {
    /// Coordinates of the class of `cocycle` in this basis, or `None` if the
    /// cochain is not a cocycle.
    pub fn coordinates(&self, cocycle: &[Rational]) -> Option<Vec<Rational>> {
        let delta = self.complex.coboundary_matrix(self.degree);
        if delta.mul_vec(cocycle).iter().any(|v| !v.is_zero()) {
            return None;
        }
        let system = self.basis_cocycles.hconcat(&self.coboundaries);
        let mut x = solve(&system, cocycle)?;
        x.truncate(self.betti);
        Some(x)
    }
}

pub fn cohomology_basis(k: &Arc<OrientedComplex>, q: usize) -> Result<CohomologyBasis, CohomologyError> {
    let m = k.dimension();
    if q > m {
        return Err(CohomologyError::DegreeOutOfRange { degree: q, dimension: m });
    }
    let cocycles = kernel_basis(&k.coboundary_matrix(q));
    let coboundaries = if q == 0 {
        RationalMatrix::zeros(k.simplex_count(0), 0)
    } else {
        k.coboundary_matrix(q - 1)
    };
    // cocycle columns that are pivots after the coboundary columns complete
    // im δ to ker δ
    let pivots = rref(&coboundaries.hconcat(&cocycles)).pivot_columns;
    let offset = coboundaries.cols();
    let reps: Vec<Vec<Rational>> =
        pivots.iter().filter(|&&c| c >= offset).map(|&c| cocycles.column(c - offset)).collect();
    let betti = reps.len();
    Ok(CohomologyBasis {
        complex: k.clone(),
        degree: q,
        basis_cocycles: RationalMatrix::from_columns(k.simplex_count(q), &reps),
        coboundaries,
        betti,
    })
}

pub fn betti_numbers(k: &Arc<OrientedComplex>) -> Vec<usize> {
    (0..=k.dimension())
        .map(|q| cohomology_basis(k, q).expect("degree in range").betti)
        .collect()
}

/// Alexander–Whitney cup product of a `p`-cochain and a `(m-p)`-cochain,
/// evaluated on the fundamental cycle.
pub fn cup_on_fundamental_cycle(k: &OrientedComplex, p: usize, a: &[Rational], b: &[Rational]) -> Rational {
    let m = k.dimension();
    let mut total = Rational::zero();
    for (top, &o) in k.simplices(m).iter().zip(k.top_orientation()) {
        let front = k.simplex_index(&top[..=p]).expect("front face");
        let back = k.simplex_index(&top[p..]).expect("back face");
        if a[front].is_zero() || b[back].is_zero() {
            continue;
        }
        let v = &a[front] * &b[back];
        if o > 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    total
}

/// Poincaré pairing matrix `D_p` with entries `⟨μ_i^p ⌣ μ_j^{m-p}, [M]⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingMatrix {
    pub degree: usize,
    pub matrix: RationalMatrix,
}

pub fn cup_pairing(k: &Arc<OrientedComplex>, p: usize) -> Result<PairingMatrix, CohomologyError> {
    let m = k.dimension();
    if p > m {
        return Err(CohomologyError::DegreeOutOfRange { degree: p, dimension: m });
    }
    let left = cohomology_basis(k, p)?;
    let right = cohomology_basis(k, m - p)?;
    let mut d = RationalMatrix::zeros(left.betti, right.betti);
    for i in 0..left.betti {
        let a = left.basis_cocycles.column(i);
        for j in 0..right.betti {
            let b = right.basis_cocycles.column(j);
            d[(i, j)] = cup_on_fundamental_cycle(k, p, &a, &b);
        }
    }
    let rank = d.rank();
    if left.betti != right.betti || rank != left.betti {
        return Err(CohomologyError::DegeneratePairing { degree: p, rank, betti: (left.betti, right.betti) });
    }
    Ok(PairingMatrix { degree: p, matrix: d })
}

/// Matrix of `H^q(f): H^q(target) -> H^q(source)` in the bases returned by
/// [`cohomology_basis`]; column `k` holds the source coordinates of the
/// pullback of the `k`-th target class.
pub fn induced_map(s: &SimplicialMapSpec, q: usize) -> Result<RationalMatrix, CohomologyError> {
    let s = validate_simplicial_map(s.clone())?;
    let source = cohomology_basis(&s.source, q)?;
    let target = cohomology_basis(&s.target, q)?;
    let pullback = s.cochain_map(q);
    let columns: Vec<Vec<Rational>> = (0..target.betti)
        .map(|k| {
            let pulled = pullback.mul_vec(&target.basis_cocycles.column(k));
            source.coordinates(&pulled).expect("pullback of a cocycle is a cocycle")
        })
        .collect();
    Ok(RationalMatrix::from_columns(source.betti, &columns))
}
