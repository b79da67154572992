//! Coincidences of pairs `f, g: M -> N`: the Lefschetz coincidence number,
//! local indices and classes of coincidence components, and the check that
//! the global invariant is the sum of the local ones.

mod detect;
pub mod lattice;
mod local;

use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::analytic::{sphere_cohomology_model, torus_cohomology_model, AnalyticError, ChartPoint, SmoothMapSpec};
use crate::degree::{DegreeConfig, DegreeError, DegreeMethod};
use crate::linalg::{Rational, RationalMatrix};
use crate::model::{CohomologyModel, ModelError};

pub use detect::find_coincidence_components;
pub use local::{local_coincidence_index, submanifold_class_coefficient};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoincidenceError {
    #[error("dimension mismatch: M has dimension {m}, N has dimension {n}")]
    DimensionMismatch { m: usize, n: usize },
    #[error("f and g do not share domain and codomain")]
    SpaceMismatch,
    #[error("trace formula gave the non-integer {0}")]
    NonIntegerTrace(String),
    #[error("coincidence detection inconclusive: {0}")]
    DetectionInconclusive(String),
    #[error("transverse frame rejected: {0}")]
    FrameNotTransverse(String),
    #[error("coincidence component is not an isolated point or a clean submanifold: {0}")]
    UnsupportedComponent(String),
    #[error("too many coincidence components to enumerate")]
    TooManyComponents,
    #[error("integer overflow in lattice algebra")]
    Overflow,
    #[error("methods disagree at {point}: {first} gives {a}, {second} gives {b}")]
    IndexDisagreement { point: String, first: DegreeMethod, a: i64, second: DegreeMethod, b: i64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error("{0}")]
    Model(String),
}

impl From<ModelError> for CoincidenceError {
    fn from(e: ModelError) -> Self {
        Self::Model(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceOptions {
    pub degree: DegreeConfig,
    /// Grid points per coordinate for the detection scan; `None` picks a
    /// default from the dimension.
    pub grid: Option<usize>,
    /// Roots closer than this (chart or chordal distance) are merged.
    pub dedup_radius: f64,
    /// Upper bound on the ball radius used for local indices.
    pub max_radius: f64,
    /// Cross-check degenerate indices with the preimage oracle.
    pub confirm: bool,
}

impl Default for CoincidenceOptions {
    fn default() -> Self {
        Self { degree: DegreeConfig::default(), grid: None, dedup_radius: 1e-4, max_radius: 0.1, confirm: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoincidenceComponent {
    IsolatedPoint {
        point: ChartPoint,
        /// Exact coordinates when found by lattice algebra.
        exact: Option<Vec<Rational>>,
        nondegenerate: bool,
    },
    /// Affine subtorus `basepoint + span(tangent)` of `T^m`.
    SubmanifoldComponent {
        basepoint: Vec<Rational>,
        tangent: Vec<Vec<i64>>,
        /// `n` directions with `det[frame, tangent] > 0`.
        frame: Vec<Vec<i64>>,
    },
}

impl CoincidenceComponent {
    pub fn dimension(&self) -> usize {
        match self {
            Self::IsolatedPoint { .. } => 0,
            Self::SubmanifoldComponent { tangent, .. } => tangent.len(),
        }
    }
}

impl fmt::Display for CoincidenceComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::IsolatedPoint { point, .. } => write!(f, "{point}"),
            Self::SubmanifoldComponent { basepoint, tangent, .. } => {
                let p = ChartPoint::new(crate::analytic::Chart::Angle, lattice::to_f64(basepoint));
                let dirs: Vec<String> = tangent
                    .iter()
                    .map(|v| format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
                    .collect();
                write!(f, "{p} + span{{{}}}", dirs.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultKind {
    /// `Λ(f,g;p) ∈ H_0 = Z` for `m = n`.
    Index,
    /// Coefficient of `[S_λ]` for `m > n`.
    ClassCoefficient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentResult {
    pub component: CoincidenceComponent,
    pub kind: ResultKind,
    pub value: i64,
    pub method: DegreeMethod,
    pub raw: f64,
    pub residual: f64,
    pub radius: f64,
    /// Product of the domain and target chart orientation signs.
    pub chart_sign: i32,
    /// Independent check of a degenerate index.
    pub confirmation: Option<(DegreeMethod, i64)>,
    /// `value · [S_λ]` in the basis of [`class_basis`], for components of
    /// positive dimension.
    pub class: Option<Vec<i64>>,
}

/// Global invariant in the report: a number (`m = n`), homology class
/// coefficients (`m > n` on tori), or absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlobalInvariant {
    Number(i64),
    Class { basis: Vec<Vec<usize>>, coefficients: Vec<i64> },
    LocalOnly,
}

impl fmt::Display for GlobalInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Number(v) => write!(f, "{v}"),
            Self::Class { basis, coefficients } => {
                let terms: Vec<String> =
                    basis.iter().zip(coefficients).map(|(j, c)| format!("{c}·{}", class_label(j))).collect();
                write!(f, "{}", terms.join(" + "))
            }
            Self::LocalOnly => write!(f, "local-only"),
        }
    }
}

/// `[x1∧x3]`-style label for the subtorus class spanned by coordinates `j`.
pub fn class_label(j: &[usize]) -> String {
    let parts: Vec<String> = j.iter().map(|i| format!("x{}", i + 1)).collect();
    format!("[{}]", parts.join("∧"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail { global: String, local: String },
    Skipped,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Self::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryCheck {
    pub forward: GlobalInvariant,
    pub reverse: GlobalInvariant,
    /// `(-1)^n`.
    pub sign: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceReport {
    pub global: GlobalInvariant,
    pub local_sum: GlobalInvariant,
    pub components: Vec<ComponentResult>,
    pub verdict: Verdict,
    pub symmetry: Option<SymmetryCheck>,
}

/// `L(f,g) = Σ_q (-1)^q tr(H^q(f) · D_N^{-1} · H^{m-q}(g)ᵀ · D_M)`, with the
/// pairings `D` taken in degree `m - q`.
pub fn lefschetz_coincidence_number(model: &CohomologyModel, f: &str, g: &str) -> Result<Rational, CoincidenceError> {
    let (m, n) = (model.source.dimension(), model.target.dimension());
    if m != n {
        return Err(CoincidenceError::DimensionMismatch { m, n });
    }
    let mut total = Rational::zero();
    for q in 0..=m {
        let hf = model.induced(f, q)?;
        let hg = model.induced(g, m - q)?;
        let dn = &model.target.pairing[m - q];
        let dm = &model.source.pairing[m - q];
        let dn_inv = dn.inverse().ok_or(ModelError::DegeneratePairing { degree: m - q })?;
        let term = (&(&(hf * &dn_inv) * &hg.transpose()) * dm).trace();
        if q % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    if !total.denom().is_one() {
        return Err(CoincidenceError::NonIntegerTrace(total.to_string()));
    }
    Ok(total)
}

/// Analytic model registering `f` and `g` under those names.
pub fn pair_model(f: &SmoothMapSpec, g: &SmoothMapSpec, cfg: &DegreeConfig) -> Result<CohomologyModel, CoincidenceError> {
    let maps = [("f", f), ("g", g)];
    if f.domain.is_torus() && f.codomain.is_torus() {
        Ok(torus_cohomology_model(&maps)?)
    } else if f.domain.is_sphere() {
        Ok(sphere_cohomology_model(&maps, cfg)?)
    } else {
        Err(CoincidenceError::Unsupported(format!("no analytic model for {f}")))
    }
}

/// Subsets indexing the basis `[x_J]` of `H_{m-n}(T^m)`.
pub fn class_basis(m: usize, n: usize) -> Vec<Vec<usize>> {
    crate::analytic::models::subsets(m, m - n)
}

/// Global coincidence class of linear maps `T^m -> T^n` (`m >= n`) with
/// `C = B - A`: coefficient `det C[:, J^c] · sgn(J^c, J)` on `[x_J]`.
///
/// The overall sign (the product of the W-orientation, graph and slice
/// conventions) is `+1`, fixed on `f = x, g = 2x` on `T^2 -> T^1`.
pub fn torus_global_class(c: &[Vec<i64>]) -> Result<GlobalInvariant, CoincidenceError> {
    let n = c.len();
    let m = c.first().map_or(0, Vec::len);
    if m < n {
        return Err(CoincidenceError::DimensionMismatch { m, n });
    }
    let cm = RationalMatrix::from_i64_rows(c);
    let basis = class_basis(m, n);
    let mut coefficients = Vec::with_capacity(basis.len());
    for j in &basis {
        let jc: Vec<usize> = (0..m).filter(|i| !j.contains(i)).collect();
        let cols: Vec<Vec<Rational>> = jc.iter().map(|&k| cm.column(k)).collect();
        let det = RationalMatrix::from_columns(n, &cols).determinant();
        let value = det.to_integer().to_i64().ok_or(CoincidenceError::Overflow)?;
        coefficients.push(value * shuffle_sign(&jc, j));
    }
    Ok(GlobalInvariant::Class { basis, coefficients })
}

fn shuffle_sign(a: &[usize], b: &[usize]) -> i64 {
    let inversions = a.iter().map(|x| b.iter().filter(|y| x > y).count()).sum::<usize>();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `[S]` for the oriented subtorus spanned by `tangent`: the minors
/// `det S[J, :]` over the basis of [`class_basis`].
pub fn subtorus_class(m: usize, tangent: &[Vec<i64>]) -> Vec<i64> {
    let k = tangent.len();
    crate::analytic::models::subsets(m, k)
        .iter()
        .map(|j| {
            let entries = j
                .iter()
                .flat_map(|&r| tangent.iter().map(move |t| Rational::from_integer(t[r].into())))
                .collect();
            RationalMatrix::from_entries(k, k, entries).determinant().to_integer().to_i64().unwrap_or(0)
        })
        .collect()
}

fn linear_difference(f: &SmoothMapSpec, g: &SmoothMapSpec) -> Option<Vec<Vec<i64>>> {
    let (a, _) = f.linear_data()?;
    let (b, _) = g.linear_data()?;
    Some(b.iter().zip(&a).map(|(rb, ra)| rb.iter().zip(ra).map(|(x, y)| x - y).collect()).collect())
}

/// Global invariant, all components with their local results, and the
/// verdict `global = Σ local`. For `m = n` the global value comes from the
/// trace formula on `model`; for `m > n` on tori from lattice algebra.
pub fn verify_residue_formula(
    f: &SmoothMapSpec,
    g: &SmoothMapSpec,
    model: Option<(&CohomologyModel, &str, &str)>,
    opts: &CoincidenceOptions,
) -> Result<CoincidenceReport, CoincidenceError> {
    let (m, n) = (f.domain.dimension(), f.codomain.dimension());
    let components = find_coincidence_components(f, g, opts)?;
    let mut results = Vec::with_capacity(components.len());
    for (i, comp) in components.iter().enumerate() {
        let others: Vec<&CoincidenceComponent> =
            components.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, c)| c).collect();
        let r = match comp {
            CoincidenceComponent::IsolatedPoint { .. } => local_coincidence_index(f, g, comp, &others, opts)?,
            CoincidenceComponent::SubmanifoldComponent { .. } => submanifold_class_coefficient(f, g, comp, opts)?,
        };
        results.push(r);
    }

    if m == n {
        let local: i64 = results.iter().map(|r| r.value).sum();
        let local_sum = GlobalInvariant::Number(local);
        let Some((model, fname, gname)) = model else {
            return Ok(CoincidenceReport {
                global: GlobalInvariant::LocalOnly,
                local_sum,
                components: results,
                verdict: Verdict::Skipped,
                symmetry: None,
            });
        };
        let global = as_i64(&lefschetz_coincidence_number(model, fname, gname)?)?;
        let reverse = as_i64(&lefschetz_coincidence_number(model, gname, fname)?)?;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let verdict = if global == local {
            Verdict::Pass
        } else {
            Verdict::Fail { global: global.to_string(), local: local.to_string() }
        };
        return Ok(CoincidenceReport {
            global: GlobalInvariant::Number(global),
            local_sum,
            components: results,
            verdict,
            symmetry: Some(SymmetryCheck {
                forward: GlobalInvariant::Number(global),
                reverse: GlobalInvariant::Number(reverse),
                sign,
                holds: reverse == sign * global,
            }),
        });
    }

    let basis = class_basis(m, n);
    let mut sum = vec![0i64; basis.len()];
    for r in &results {
        for (s, c) in sum.iter_mut().zip(r.class.as_deref().unwrap_or(&[])) {
            *s += c;
        }
    }
    let local_sum = GlobalInvariant::Class { basis, coefficients: sum };
    let Some(c) = linear_difference(f, g) else {
        return Ok(CoincidenceReport {
            global: GlobalInvariant::LocalOnly,
            local_sum,
            components: results,
            verdict: Verdict::Skipped,
            symmetry: None,
        });
    };
    let global = torus_global_class(&c)?;
    let neg: Vec<Vec<i64>> = c.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let reverse = torus_global_class(&neg)?;
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let holds = match (&global, &reverse) {
        (GlobalInvariant::Class { coefficients: a, .. }, GlobalInvariant::Class { coefficients: b, .. }) => {
            a.iter().zip(b).all(|(x, y)| *y == sign * x)
        }
        _ => false,
    };
    let verdict =
        if global == local_sum { Verdict::Pass } else { Verdict::Fail { global: global.to_string(), local: local_sum.to_string() } };
    Ok(CoincidenceReport {
        global: global.clone(),
        local_sum,
        components: results,
        verdict,
        symmetry: Some(SymmetryCheck { forward: global, reverse, sign, holds }),
    })
}

fn as_i64(q: &Rational) -> Result<i64, CoincidenceError> {
    q.to_integer().to_i64().ok_or(CoincidenceError::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{ManifoldDescriptor, RatPoly};
    use crate::fixtures;
    use crate::linalg::rat;
    use crate::simplicial::SimplicialMapSpec;
    use std::sync::Arc;

    fn z_pow(k: usize) -> SmoothMapSpec {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        SmoothMapSpec::sphere_rational(RatPoly::from_integers(&c), RatPoly::from_integers(&[1])).unwrap()
    }

    #[test]
    fn trace_formula_examples() {
        let cfg = DegreeConfig::default();
        let a = SmoothMapSpec::torus_linear_i64(&[&[2, 1], &[1, 1]]);
        let id = SmoothMapSpec::identity(&ManifoldDescriptor::torus(2)).unwrap();
        let model = pair_model(&a, &id, &cfg).unwrap();
        assert_eq!(lefschetz_coincidence_number(&model, "f", "g").unwrap(), rat(-1));

        let model = pair_model(&z_pow(2), &z_pow(3), &cfg).unwrap();
        assert_eq!(lefschetz_coincidence_number(&model, "f", "g").unwrap(), rat(5));

        let s2 = ManifoldDescriptor::sphere(2);
        let anti = crate::analytic::parse_map_expr("-x/(x*x + y*y); -y/(x*x + y*y)", &s2, &s2).unwrap();
        let model = pair_model(&anti, &SmoothMapSpec::identity(&s2).unwrap(), &cfg).unwrap();
        assert_eq!(lefschetz_coincidence_number(&model, "f", "g").unwrap(), rat(0));
    }

    #[test]
    fn euler_characteristic_anchor() {
        for (k, chi) in [(fixtures::octahedron(), 2), (fixtures::torus7(), 0), (fixtures::sphere3(), 0)] {
            let k = Arc::new(k);
            let id = SimplicialMapSpec::identity(k.clone());
            let model = CohomologyModel::simplicial(&k, &k, &[("id", &id)]).unwrap();
            assert_eq!(lefschetz_coincidence_number(&model, "id", "id").unwrap(), rat(chi));
        }
        let t2 = SmoothMapSpec::identity(&ManifoldDescriptor::torus(2)).unwrap();
        let model = pair_model(&t2, &t2, &DegreeConfig::default()).unwrap();
        assert_eq!(lefschetz_coincidence_number(&model, "f", "g").unwrap(), rat(0));
    }

    #[test]
    fn dimension_mismatch() {
        let f = SmoothMapSpec::torus_linear_i64(&[&[1, 0]]);
        let model = torus_cohomology_model(&[("f", &f)]).unwrap();
        assert!(matches!(
            lefschetz_coincidence_number(&model, "f", "f"),
            Err(CoincidenceError::DimensionMismatch { m: 2, n: 1 })
        ));
    }

    #[test]
    fn global_class_of_circle_fixture() {
        assert_eq!(
            torus_global_class(&[vec![1, 0]]).unwrap(),
            GlobalInvariant::Class { basis: vec![vec![0], vec![1]], coefficients: vec![0, 1] }
        );
        assert_eq!(subtorus_class(2, &[vec![0, 1]]), vec![0, 1]);
    }
}
