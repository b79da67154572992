//! Backend-independent cohomology data consumed by the trace formula.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::cohomology::{betti_numbers, cup_pairing, induced_map, CohomologyError};
use crate::linalg::RationalMatrix;
use crate::simplicial::{OrientedComplex, SimplicialMapSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Backend {
    Analytic,
    Simplicial,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Analytic => "analytic",
            Backend::Simplicial => "simplicial",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("induced matrix for map `{name}` in degree {degree} has shape {got:?}, expected {expected:?}")]
    ShapeMismatch { name: String, degree: usize, got: (usize, usize), expected: (usize, usize) },
    #[error("map `{name}` has induced matrices for {got} degrees, expected {expected}")]
    DegreeCount { name: String, got: usize, expected: usize },
    #[error("map `{0}` is not registered in the model")]
    UnknownMap(String),
    #[error("pairing matrix in degree {degree} is not invertible")]
    DegeneratePairing { degree: usize },
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("map `{name}` does not go between the model's source and target")]
    WrongSpaces { name: String },
}

/// Side data for one manifold: Betti numbers and the pairings `D_p`
/// (`b_p × b_{m-p}`), for `p = 0..=m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldCohomology {
    pub betti: Vec<usize>,
    pub pairing: Vec<RationalMatrix>,
}

impl ManifoldCohomology {
    pub fn dimension(&self) -> usize {
        self.betti.len() - 1
    }

    fn validate(&self) -> Result<(), ModelError> {
        let m = self.dimension();
        for (p, d) in self.pairing.iter().enumerate() {
            if d.rows() != self.betti[p] || d.cols() != self.betti[m - p] || d.rank() != d.rows() {
                return Err(ModelError::DegeneratePairing { degree: p });
            }
        }
        Ok(())
    }
}

/// Betti data, pairing matrices and induced maps `H^q(·)` for a family of
/// maps `M -> N` sharing source and target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyModel {
    pub backend: Backend,
    pub source: ManifoldCohomology,
    pub target: ManifoldCohomology,
    maps: BTreeMap<String, Vec<RationalMatrix>>,
}

impl CohomologyModel {
    pub fn new(backend: Backend, source: ManifoldCohomology, target: ManifoldCohomology) -> Result<Self, ModelError> {
        source.validate()?;
        target.validate()?;
        Ok(Self { backend, source, target, maps: BTreeMap::new() })
    }

    /// Registers `H^q(name)` for `q = 0..=min(m, n)`.
    pub fn register(&mut self, name: &str, induced: Vec<RationalMatrix>) -> Result<(), ModelError> {
        let top = self.source.dimension().min(self.target.dimension());
        if induced.len() != top + 1 {
            return Err(ModelError::DegreeCount { name: name.into(), got: induced.len(), expected: top + 1 });
        }
        for (q, h) in induced.iter().enumerate() {
            let expected = (self.source.betti[q], self.target.betti[q]);
            if (h.rows(), h.cols()) != expected {
                return Err(ModelError::ShapeMismatch {
                    name: name.into(),
                    degree: q,
                    got: (h.rows(), h.cols()),
                    expected,
                });
            }
        }
        self.maps.insert(name.to_string(), induced);
        Ok(())
    }

    pub fn induced(&self, name: &str, q: usize) -> Result<&RationalMatrix, ModelError> {
        let maps = self.maps.get(name).ok_or_else(|| ModelError::UnknownMap(name.into()))?;
        maps.get(q).ok_or_else(|| ModelError::UnknownMap(format!("{name} (degree {q})")))
    }

    pub fn map_names(&self) -> impl Iterator<Item = &str> {
        self.maps.keys().map(String::as_str)
    }

    /// Model on triangulations; every map must go from `source` to `target`.
    pub fn simplicial(
        source: &Arc<OrientedComplex>,
        target: &Arc<OrientedComplex>,
        maps: &[(&str, &SimplicialMapSpec)],
    ) -> Result<Self, ModelError> {
        let mut model = Self::new(Backend::Simplicial, simplicial_side(source)?, simplicial_side(target)?)?;
        let top = source.dimension().min(target.dimension());
        for (name, s) in maps {
            if *s.source != **source || *s.target != **target {
                return Err(ModelError::WrongSpaces { name: name.to_string() });
            }
            let induced = (0..=top).map(|q| induced_map(s, q)).collect::<Result<Vec<_>, _>>()?;
            model.register(name, induced)?;
        }
        Ok(model)
    }
}

pub fn simplicial_side(k: &Arc<OrientedComplex>) -> Result<ManifoldCohomology, ModelError> {
    let betti = betti_numbers(k);
    let pairing = (0..=k.dimension())
        .map(|p| cup_pairing(k, p).map(|d| d.matrix))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ManifoldCohomology { betti, pairing })
}
