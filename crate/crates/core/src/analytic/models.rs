//! Cohomology models of tori and spheres built from closed formulas.
//!
//! On `T^m` the classes `dx_I` (`I` a `q`-subset in increasing order) form
//! a basis of `H^q`; a linear map pulls `dy_J` back to `Σ_I det A[J, I] dx_I`,
//! so `H^q(f) = Λ^q(Aᵀ)` with rows indexed by source classes.

use super::maps::{rational_degree, MapFamily, SmoothMapSpec};
use super::manifold::ManifoldDescriptor;
use super::AnalyticError;
use crate::degree::{global_sphere_degree, DegreeConfig, DegreeError};
use crate::linalg::{rat, Rational, RationalMatrix};
use crate::model::{Backend, CohomologyModel, ManifoldCohomology};

/// `q`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, q: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, q, &mut Vec::new(), &mut out);
    out
}

/// `Λ^q(M)`: entry `(I, J)` is the minor of `M` on rows `I`, columns `J`.
pub fn exterior_power(m: &RationalMatrix, q: usize) -> RationalMatrix {
    let rows = subsets(m.rows(), q);
    let cols = subsets(m.cols(), q);
    let mut out = RationalMatrix::zeros(rows.len(), cols.len());
    for (a, i) in rows.iter().enumerate() {
        for (b, j) in cols.iter().enumerate() {
            let minor = RationalMatrix::from_entries(
                q,
                q,
                i.iter().flat_map(|&r| j.iter().map(move |&c| (r, c))).map(|(r, c)| m[(r, c)].clone()).collect(),
            );
            out[(a, b)] = minor.determinant();
        }
    }
    out
}

// Sign of the permutation listing `a` then `b`, or 0 if they overlap.
fn shuffle_sign(a: &[usize], b: &[usize]) -> i64 {
    let mut sign = 1;
    for x in a {
        for y in b {
            if x == y {
                return 0;
            }
            if x > y {
                sign = -sign;
            }
        }
    }
    sign
}

/// Pairing `∫ dx_I ∧ dx_K` on `T^m` for `|I| = p`, `|K| = m - p`.
pub fn torus_pairing(m: usize, p: usize) -> RationalMatrix {
    let rows = subsets(m, p);
    let cols = subsets(m, m - p);
    let mut d = RationalMatrix::zeros(rows.len(), cols.len());
    for (a, i) in rows.iter().enumerate() {
        for (b, k) in cols.iter().enumerate() {
            d[(a, b)] = rat(shuffle_sign(i, k));
        }
    }
    d
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn torus_side(m: usize) -> ManifoldCohomology {
    ManifoldCohomology {
        betti: (0..=m).map(|q| binomial(m, q)).collect(),
        pairing: (0..=m).map(|p| torus_pairing(m, p)).collect(),
    }
}

fn sphere_side(m: usize) -> ManifoldCohomology {
    let betti: Vec<usize> = (0..=m).map(|q| usize::from(q == 0 || q == m)).collect();
    let pairing = (0..=m)
        .map(|p| if betti[p] == 1 { RationalMatrix::identity(1) } else { RationalMatrix::zeros(0, 0) })
        .collect();
    ManifoldCohomology { betti, pairing }
}

fn model_error(e: crate::model::ModelError) -> AnalyticError {
    AnalyticError::InvalidMap(e.to_string())
}

/// Model for linear maps `T^m -> T^n`; offsets are ignored (homotopy
/// invariance).
pub fn torus_cohomology_model(maps: &[(&str, &SmoothMapSpec)]) -> Result<CohomologyModel, AnalyticError> {
    let mut dims: Option<(usize, usize)> = None;
    let mut matrices = Vec::new();
    for (name, s) in maps {
        let (a, _) = s
            .linear_data()
            .ok_or_else(|| AnalyticError::FamilyMismatch(format!("{name} is {}, expected a linear torus map", s.family_name())))?;
        let d = (s.domain.dimension(), s.codomain.dimension());
        if !s.domain.is_torus() || !s.codomain.is_torus() || dims.is_some_and(|x| x != d) {
            return Err(AnalyticError::FamilyMismatch(format!("{name} does not map between the model's tori")));
        }
        dims = Some(d);
        matrices.push((name, RationalMatrix::from_i64_rows(&a)));
    }
    let (m, n) = dims.ok_or_else(|| AnalyticError::InvalidMap("torus model needs at least one map".into()))?;
    let mut model = CohomologyModel::new(Backend::Analytic, torus_side(m), torus_side(n)).map_err(model_error)?;
    for (name, a) in matrices {
        let at = a.transpose();
        let induced = (0..=m.min(n)).map(|q| exterior_power(&at, q)).collect();
        model.register(name, induced).map_err(model_error)?;
    }
    Ok(model)
}

/// Degree of a self-map of `S^m`: algebraic for rational maps, the global
/// Kronecker integral for chart expressions.
pub fn sphere_map_degree(s: &SmoothMapSpec, cfg: &DegreeConfig) -> Result<i64, AnalyticError> {
    if let Some(d) = rational_degree(s) {
        return Ok(d);
    }
    match &s.family {
        MapFamily::ChartExpr { .. } => match global_sphere_degree(s, cfg) {
            Ok(r) => Ok(r.value),
            Err(DegreeError::NoConvergence { raw, residual, .. }) => Err(AnalyticError::DegreeUnresolved { raw, residual }),
            Err(e) => Err(AnalyticError::ChartDomain(e.to_string())),
        },
        _ => Err(AnalyticError::FamilyMismatch(format!("{} is not a sphere map family", s.family_name()))),
    }
}

/// Model for maps `S^m -> S^m`: `b = (1, 0, .., 0, 1)`, `H^m(f) = [deg f]`.
pub fn sphere_cohomology_model(
    maps: &[(&str, &SmoothMapSpec)],
    cfg: &DegreeConfig,
) -> Result<CohomologyModel, AnalyticError> {
    let mut dim: Option<usize> = None;
    let mut degrees = Vec::new();
    for (name, s) in maps {
        let (a, b) = (s.domain.normalized(), s.codomain.normalized());
        let m = match (a, b) {
            (ManifoldDescriptor::Sphere(a), ManifoldDescriptor::Sphere(b)) if a == b => a,
            _ => return Err(AnalyticError::FamilyMismatch(format!("{name} is not a map S^m -> S^m"))),
        };
        if dim.is_some_and(|d| d != m) {
            return Err(AnalyticError::FamilyMismatch(format!("{name} lives on a different sphere")));
        }
        dim = Some(m);
        degrees.push((name, sphere_map_degree(s, cfg)?));
    }
    let m = dim.ok_or_else(|| AnalyticError::InvalidMap("sphere model needs at least one map".into()))?;
    let mut model = CohomologyModel::new(Backend::Analytic, sphere_side(m), sphere_side(m)).map_err(model_error)?;
    for (name, deg) in degrees {
        let induced = (0..=m)
            .map(|q| match q {
                0 => RationalMatrix::identity(1),
                q if q == m => RationalMatrix::from_entries(1, 1, vec![Rational::from_integer(deg.into())]),
                _ => RationalMatrix::zeros(0, 0),
            })
            .collect();
        model.register(name, induced).map_err(model_error)?;
    }
    Ok(model)
}
