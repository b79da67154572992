use rayon::prelude::*;

use super::quadrature::{angle_rule, parametrization_sign, sphere_area, sphere_point};
use super::{snap, snapped, DegreeConfig, DegreeError, DegreeMethod, DegreeResult, LocalZeroProblem};
use crate::numeric::{determinant, fd_jacobian, norm, pairwise_sum, plain_diff, RealMatrix};

/// Kronecker integral `(1/|S^{m-1}|) ∫ det[γ, ∂γ/∂t] dt` of `γ = h/‖h‖` over
/// the boundary sphere, doubling the order from `order` until two
/// consecutive estimates agree within the snap tolerance.
pub fn local_degree_kronecker(
    prob: &LocalZeroProblem,
    order: usize,
    cfg: &DegreeConfig,
) -> Result<DegreeResult, DegreeError> {
    let m = prob.dimension();
    let mut diag = prob.diagnostics();
    if m == 1 {
        let lo = prob.eval(&prob.boundary_point(&[-1.0]))?[0];
        let hi = prob.eval(&prob.boundary_point(&[1.0]))?[0];
        let raw = (hi.signum() - lo.signum()) / 2.0;
        return snapped(raw, DegreeMethod::Kronecker, diag, cfg);
    }
    let mut order = order.max(2);
    let mut prev: Option<f64> = None;
    let mut raw = f64::NAN;
    for _ in 0..=cfg.max_budget {
        raw = integrate(prob, order)?;
        diag.order = Some(order);
        if let (Some(p), Some((_, residual))) = (prev, snap(raw)) {
            if (raw - p).abs() < cfg.snap_tolerance && residual < cfg.snap_tolerance {
                return snapped(raw, DegreeMethod::Kronecker, diag, cfg);
            }
        }
        prev = Some(raw);
        order *= 2;
    }
    let residual = snap(raw).map_or(0.5, |(_, r)| r);
    Err(DegreeError::NoConvergence { method: DegreeMethod::Kronecker, raw, residual })
}

fn integrate(prob: &LocalZeroProblem, order: usize) -> Result<f64, DegreeError> {
    let m = prob.dimension();
    let rule = angle_rule(m, order);
    let values: Vec<Result<f64, DegreeError>> =
        rule.par_iter().map(|(t, w)| integrand(prob, t).map(|v| v * w)).collect();
    let values = values.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(parametrization_sign(m) * pairwise_sum(&values) / sphere_area(m - 1))
}

// det[h, ∂h/∂t_1, ..] / ‖h‖^m at the boundary point with angles t.
fn integrand(prob: &LocalZeroProblem, t: &[f64]) -> Result<f64, DegreeError> {
    let m = prob.dimension();
    let at = |t: &[f64]| -> Result<Vec<f64>, String> {
        let x = prob.boundary_point(&sphere_point(t));
        prob.eval(&x).map_err(|e| e.to_string())
    };
    let h = at(t).map_err(DegreeError::Evaluation)?;
    let d = fd_jacobian(t, m, at, plain_diff).map_err(DegreeError::Evaluation)?.matrix;
    let mut frame = RealMatrix::zeros(m, m);
    for i in 0..m {
        frame[(i, 0)] = h[i];
        for j in 0..m - 1 {
            frame[(i, j + 1)] = d[(i, j)];
        }
    }
    Ok(determinant(&frame) / norm(&h).powi(m as i32))
}
