//! Local mapping degree `deg(h, p)` of a map `h: R^m -> R^m` at an isolated
//! zero, by four independent methods: Jacobian sign, Kronecker integral,
//! winding number (m = 2) and a signed preimage count.

mod global;
mod kronecker;
mod oracle;
pub mod quadrature;
mod winding;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::numeric::{determinant, max_abs, norm, RealMatrix};

pub use global::global_sphere_degree;
pub use kronecker::local_degree_kronecker;
pub use oracle::local_degree_oracle;
pub use winding::winding_number;

/// `h` as a shareable closure; evaluation errors are strings so callers can
/// wrap chart failures.
pub type ZeroMap = Arc<dyn Fn(&[f64]) -> Result<Vec<f64>, String> + Send + Sync>;

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeConfig {
    /// Maximum `|raw - value|` accepted when snapping to an integer.
    pub snap_tolerance: f64,
    /// Relative floor for `min ‖h‖` on the boundary sphere.
    pub separation: f64,
    pub newton_tolerance: f64,
    /// Relative bound on `‖h(p)‖` at the centre.
    pub zero_tolerance: f64,
    /// Relative bound on `|det J|` below which a zero counts as degenerate.
    pub nondegeneracy: f64,
    pub quadrature_order: usize,
    pub winding_samples: usize,
    pub oracle_grid: usize,
    /// Number of order/sample doublings before giving up.
    pub max_budget: usize,
    pub oracle_retries: usize,
    pub seed: u64,
}

impl Default for DegreeConfig {
    fn default() -> Self {
        Self {
            snap_tolerance: 1e-6,
            separation: 1e-9,
            newton_tolerance: 1e-12,
            zero_tolerance: 1e-6,
            nondegeneracy: 1e-8,
            quadrature_order: 16,
            winding_samples: 64,
            oracle_grid: 16,
            max_budget: 6,
            oracle_retries: 4,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DegreeMethod {
    JacobianSign,
    Kronecker,
    Winding,
    Oracle,
}

impl DegreeMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::JacobianSign => "jacobian_sign",
            Self::Kronecker => "kronecker",
            Self::Winding => "winding",
            Self::Oracle => "oracle",
        }
    }
}

impl fmt::Display for DegreeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DegreeDiagnostics {
    pub order: Option<usize>,
    pub samples: Option<usize>,
    pub preimages: Option<usize>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeResult {
    pub value: i64,
    pub raw: f64,
    pub residual: f64,
    pub method: DegreeMethod,
    pub diagnostics: DegreeDiagnostics,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DegreeError {
    #[error("Jacobian determinant {det:.3e} is below the non-degeneracy threshold")]
    DegenerateJacobian { det: f64 },
    #[error("{method} did not converge: raw {raw}, residual {residual:.3e}")]
    NoConvergence { method: DegreeMethod, raw: f64, residual: f64 },
    #[error("h nearly vanishes on the boundary sphere (min ‖h‖ = {min_norm:.3e}, threshold {threshold:.3e})")]
    BoundaryZero { min_norm: f64, threshold: f64 },
    #[error("h does not vanish at the centre (‖h(p)‖ = {norm:.3e})")]
    CenterNotZero { norm: f64 },
    #[error("preimage oracle inconclusive after {attempts} regular values")]
    OracleInconclusive { attempts: usize },
    #[error("dimension {got} not supported by {method}")]
    Dimension { method: DegreeMethod, got: usize },
    #[error("evaluation failed: {0}")]
    Evaluation(String),
}

/// Normalized angular form on `R^m \ {0}`: `ψ_m` integrates to 1 over the
/// unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularFormSpec {
    pub dimension: usize,
    pub normalization: f64,
}

impl AngularFormSpec {
    pub fn new(m: usize) -> Self {
        Self { dimension: m, normalization: 1.0 / quadrature::sphere_area(m - 1) }
    }
}

/// A zero of `h` at `center` isolated in the closed ball of radius `radius`.
#[derive(Clone)]
pub struct LocalZeroProblem {
    h: ZeroMap,
    dim: usize,
    center: Vec<f64>,
    radius: f64,
    boundary_min: f64,
    scale: f64,
}

impl fmt::Debug for LocalZeroProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalZeroProblem")
            .field("dim", &self.dim)
            .field("center", &self.center)
            .field("radius", &self.radius)
            .field("boundary_min", &self.boundary_min)
            .finish()
    }
}

impl LocalZeroProblem {
    /// Checks the boundary separation and the zero at the centre.
    pub fn new(h: ZeroMap, center: Vec<f64>, radius: f64, cfg: &DegreeConfig) -> Result<Self, DegreeError> {
        let dim = center.len();
        if dim == 0 {
            return Err(DegreeError::Dimension { method: DegreeMethod::Kronecker, got: 0 });
        }
        let mut prob = Self { h, dim, center, radius, boundary_min: 0.0, scale: 0.0 };
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for u in boundary_samples(dim) {
            let v = norm(&prob.eval(&prob.boundary_point(&u))?);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let threshold = cfg.separation * (1.0 + hi);
        if lo.is_nan() || lo <= threshold {
            return Err(DegreeError::BoundaryZero { min_norm: lo, threshold });
        }
        let at_center = norm(&prob.eval(&prob.center)?);
        if at_center > cfg.zero_tolerance * (1.0 + hi) {
            return Err(DegreeError::CenterNotZero { norm: at_center });
        }
        prob.boundary_min = lo;
        prob.scale = hi;
        Ok(prob)
    }

    pub fn from_fn<F>(f: F, center: Vec<f64>, radius: f64, cfg: &DegreeConfig) -> Result<Self, DegreeError>
    where
        F: Fn(&[f64]) -> Result<Vec<f64>, String> + Send + Sync + 'static,
    {
        Self::new(Arc::new(f), center, radius, cfg)
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Smallest sampled `‖h‖` on the boundary sphere.
    pub fn boundary_min(&self) -> f64 {
        self.boundary_min
    }

    /// Largest sampled `‖h‖` on the boundary sphere.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>, DegreeError> {
        let v = (self.h)(x).map_err(DegreeError::Evaluation)?;
        if v.len() != self.dim {
            return Err(DegreeError::Evaluation(format!("h returned {} values, expected {}", v.len(), self.dim)));
        }
        if v.iter().any(|c| !c.is_finite()) {
            return Err(DegreeError::Evaluation(format!("h is not finite at {x:?}")));
        }
        Ok(v)
    }

    pub(crate) fn boundary_point(&self, u: &[f64]) -> Vec<f64> {
        self.center.iter().zip(u).map(|(c, u)| c + self.radius * u).collect()
    }

    fn diagnostics(&self) -> DegreeDiagnostics {
        DegreeDiagnostics { radius: self.radius, ..Default::default() }
    }
}

// Unit vectors used for the boundary separation check.
fn boundary_samples(m: usize) -> Vec<Vec<f64>> {
    match m {
        1 => vec![vec![-1.0], vec![1.0]],
        2 => (0..512)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / 512.0;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => {
            let per = match m {
                3 => 48,
                4 => 16,
                _ => 6,
            };
            let grid: Vec<Vec<f64>> = quadrature::angle_rule(m, per).into_iter().map(|(t, _)| t).collect();
            grid.iter().map(|t| quadrature::sphere_point(t)).collect()
        }
    }
}

/// Nearest integer, or `None` on an exact half-way tie.
pub fn snap(raw: f64) -> Option<(i64, f64)> {
    if !raw.is_finite() {
        return None;
    }
    let value = raw.round();
    let residual = (raw - value).abs();
    if residual == 0.5 {
        return None;
    }
    Some((value as i64, residual))
}

pub(crate) fn snapped(
    raw: f64,
    method: DegreeMethod,
    diagnostics: DegreeDiagnostics,
    cfg: &DegreeConfig,
) -> Result<DegreeResult, DegreeError> {
    match snap(raw) {
        Some((value, residual)) if residual < cfg.snap_tolerance => {
            Ok(DegreeResult { value, raw, residual, method, diagnostics })
        }
        Some((_, residual)) => Err(DegreeError::NoConvergence { method, raw, residual }),
        None => Err(DegreeError::NoConvergence { method, raw, residual: 0.5 }),
    }
}

/// `true` if `|det J|` clears the relative non-degeneracy threshold.
pub fn is_nondegenerate(jac: &RealMatrix, cfg: &DegreeConfig) -> bool {
    let m = jac.nrows() as i32;
    let scale = max_abs(jac).max(1.0).powi(m);
    determinant(jac).abs() > cfg.nondegeneracy * scale
}

/// `sgn det J(p)` at a non-degenerate zero.
pub fn local_degree_jacobian(
    prob: &LocalZeroProblem,
    jac_at_p: &RealMatrix,
    cfg: &DegreeConfig,
) -> Result<DegreeResult, DegreeError> {
    if jac_at_p.nrows() != prob.dim || jac_at_p.ncols() != prob.dim {
        return Err(DegreeError::Dimension { method: DegreeMethod::JacobianSign, got: jac_at_p.nrows() });
    }
    let det = determinant(jac_at_p);
    if !is_nondegenerate(jac_at_p, cfg) {
        return Err(DegreeError::DegenerateJacobian { det });
    }
    let value = if det > 0.0 { 1 } else { -1 };
    Ok(DegreeResult {
        value,
        raw: value as f64,
        residual: 0.0,
        method: DegreeMethod::JacobianSign,
        diagnostics: prob.diagnostics(),
    })
}
