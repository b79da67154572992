use rayon::prelude::*;

use super::quadrature::{angle_rule, gauss_legendre_on, sphere_area, sphere_point, sphere_volume_factor};
use super::{snap, snapped, DegreeConfig, DegreeDiagnostics, DegreeError, DegreeMethod, DegreeResult};
use crate::analytic::{Chart, ChartPoint, ManifoldDescriptor, SmoothMapSpec};
use crate::numeric::{determinant, pairwise_sum};

/// Degree of `f: S^m -> S^m` as `(1/|S^m|) ∫ f^* vol`, integrating over the
/// unit balls of the two stereographic charts.
pub fn global_sphere_degree(spec: &SmoothMapSpec, cfg: &DegreeConfig) -> Result<DegreeResult, DegreeError> {
    let (s, t) = (spec.domain.normalized(), spec.codomain.normalized());
    let m = match (&s, &t) {
        (ManifoldDescriptor::Sphere(a), ManifoldDescriptor::Sphere(b)) if a == b => *a,
        _ => return Err(DegreeError::Evaluation(format!("global degree needs S^m -> S^m, got {spec}"))),
    };
    let mut order = cfg.quadrature_order.max(4);
    let mut prev: Option<f64> = None;
    let mut raw = f64::NAN;
    let mut diag = DegreeDiagnostics { radius: 1.0, ..Default::default() };
    for _ in 0..=cfg.max_budget {
        raw = integrate(spec, m, order)?;
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

fn integrate(spec: &SmoothMapSpec, m: usize, order: usize) -> Result<f64, DegreeError> {
    // (point in the unit ball, weight including the polar volume factor)
    let mut ball: Vec<(Vec<f64>, f64)> = Vec::new();
    if m == 1 {
        ball.extend(gauss_legendre_on(2 * order, -1.0, 1.0).into_iter().map(|(x, w)| (vec![x], w)));
    } else {
        let radial = gauss_legendre_on(order, 0.0, 1.0);
        for (t, wt) in angle_rule(m, order) {
            let u = sphere_point(&t);
            let vol = sphere_volume_factor(&t) * wt;
            for &(rho, wr) in &radial {
                let x = u.iter().map(|c| rho * c).collect();
                ball.push((x, vol * wr * rho.powi(m as i32 - 1)));
            }
        }
    }
    let domain = &spec.domain;
    let mut total = 0.0;
    for chart in [Chart::Z, Chart::W] {
        let chart_sign = f64::from(domain.orientation_sign(chart));
        let values = ball
            .par_iter()
            .map(|(x, w)| density(spec, m, &ChartPoint::new(chart, x.clone())).map(|d| d * w * chart_sign))
            .collect::<Vec<_>>()
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        total += pairwise_sum(&values);
    }
    Ok(total / sphere_area(m))
}

// f^*(vol) at p, relative to the chart's coordinate volume.
fn density(spec: &SmoothMapSpec, m: usize, p: &ChartPoint) -> Result<f64, DegreeError> {
    let err = |e: crate::analytic::AnalyticError| DegreeError::Evaluation(e.to_string());
    let image = spec.eval_in(p, None).map_err(err)?;
    let jac = spec.jacobian_in(p, image.chart).map_err(err)?.matrix;
    let r2: f64 = image.coords.iter().map(|v| v * v).sum();
    let conformal = (2.0 / (1.0 + r2)).powi(m as i32);
    let target_sign = f64::from(spec.codomain.orientation_sign(image.chart));
    Ok(target_sign * conformal * determinant(&jac))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{parse_map_expr, RatPoly};

    #[test]
    fn rational_maps_match_algebraic_degree() {
        let cfg = DegreeConfig::default();
        let z3 = SmoothMapSpec::sphere_rational(RatPoly::from_integers(&[0, 0, 0, 1]), RatPoly::from_integers(&[1])).unwrap();
        assert_eq!(global_sphere_degree(&z3, &cfg).unwrap().value, 3);
        let inv = SmoothMapSpec::sphere_rational(RatPoly::from_integers(&[1]), RatPoly::from_integers(&[0, 1])).unwrap();
        assert_eq!(global_sphere_degree(&inv, &cfg).unwrap().value, 1);
    }

    #[test]
    fn antipodal_maps() {
        let cfg = DegreeConfig::default();
        for (m, text, expected) in [
            (1, "-x/(x*x)", 1),
            (2, "-x/(x*x + y*y); -y/(x*x + y*y)", -1),
            (3, "-x/(x*x + y*y + z*z); -y/(x*x + y*y + z*z); -z/(x*x + y*y + z*z)", 1),
        ] {
            let s = ManifoldDescriptor::sphere(m);
            let f = parse_map_expr(text, &s, &s).unwrap();
            let r = global_sphere_degree(&f, &cfg).unwrap();
            assert_eq!(r.value, expected, "S^{m}: raw {}", r.raw);
        }
    }

    #[test]
    fn reflection_and_identity() {
        let cfg = DegreeConfig::default();
        let s = ManifoldDescriptor::sphere(2);
        let conj = parse_map_expr("x; -y", &s, &s).unwrap();
        assert_eq!(global_sphere_degree(&conj, &cfg).unwrap().value, -1);
        let id = SmoothMapSpec::identity(&ManifoldDescriptor::sphere(3)).unwrap();
        assert_eq!(global_sphere_degree(&id, &cfg).unwrap().value, 1);
    }
}
