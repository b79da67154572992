use std::sync::Arc;

use super::detect::{difference, numerically_nondegenerate, target_chart};
use super::lattice::to_f64;
use super::{
    linear_difference, subtorus_class, CoincidenceComponent, CoincidenceError, CoincidenceOptions, ComponentResult,
    ResultKind,
};
use crate::analytic::{Chart, ChartPoint, SmoothMapSpec};
use crate::degree::{
    is_nondegenerate, local_degree_jacobian, local_degree_kronecker, local_degree_oracle, winding_number, DegreeError,
    DegreeMethod, DegreeResult, LocalZeroProblem, ZeroMap,
};
use crate::numeric::{determinant, fd_jacobian, plain_diff, wrapped_diff, RealMatrix};

/// `Λ(f,g;p) = deg(g - f, p)` at an isolated coincidence point, read in the
/// point's chart and the chart of `f(p)` and corrected by their orientation
/// signs. Tries the Jacobian sign, then winding (m = 2), Kronecker and the
/// preimage oracle; degenerate indices are cross-checked by the oracle when
/// `opts.confirm` is set.
pub fn local_coincidence_index(
    f: &SmoothMapSpec,
    g: &SmoothMapSpec,
    comp: &CoincidenceComponent,
    others: &[&CoincidenceComponent],
    opts: &CoincidenceOptions,
) -> Result<ComponentResult, CoincidenceError> {
    let CoincidenceComponent::IsolatedPoint { point, .. } = comp else {
        return Err(CoincidenceError::UnsupportedComponent(comp.to_string()));
    };
    let (m, n) = (f.domain.dimension(), f.codomain.dimension());
    if m != n {
        return Err(CoincidenceError::DimensionMismatch { m, n });
    }
    let chart = point.chart;
    let target = target_chart(f, point)?;
    let chart_sign = f.domain.orientation_sign(chart) * f.codomain.orientation_sign(target);
    let (fc, gc) = (f.clone(), g.clone());
    let h: ZeroMap = Arc::new(move |x: &[f64]| difference(&fc, &gc, chart, target, x));

    let (jac, lattice_radius, regular) = match linear_difference(f, g) {
        Some(c) => {
            let j = RealMatrix::from_row_slice(n, m, &c.iter().flatten().map(|&v| v as f64).collect::<Vec<_>>());
            let r = 0.5 / j.norm();
            let regular = is_nondegenerate(&j, &opts.degree);
            (j, r, regular)
        }
        None => {
            let j = fd_jacobian(&point.coords, n, |x| h(x), plain_diff).map_err(DegreeError::Evaluation)?.matrix;
            let regular = numerically_nondegenerate(&j, opts);
            (j, f64::INFINITY, regular)
        }
    };
    let mut radius = opts.max_radius.min(lattice_radius);
    for other in others {
        if let CoincidenceComponent::IsolatedPoint { point: q, .. } = other {
            if let Some(d) = chart_distance(f, point, q) {
                radius = radius.min(0.4 * d);
            }
        }
    }
    let prob = problem_with_shrinking(h, point.coords.clone(), radius, opts)?;
    let result = degree_chain(&prob, &jac, regular, opts)?;
    let confirmation = confirm(&prob, &result, &point.to_string(), opts)?;
    Ok(ComponentResult {
        component: comp.clone(),
        kind: ResultKind::Index,
        value: result.value * i64::from(chart_sign),
        method: result.method,
        raw: result.raw,
        residual: result.residual,
        radius: prob.radius(),
        chart_sign,
        confirmation,
        class: None,
    })
}

/// Coefficient of `[S_λ]` in `Λ(f,g;S_λ)` for an `(m-n)`-dimensional
/// subtorus component: the degree of `g - f` restricted to the transverse
/// slice `p_λ + span(frame)`, where the frame followed by the tangent
/// directions is positively oriented.
pub fn submanifold_class_coefficient(
    f: &SmoothMapSpec,
    g: &SmoothMapSpec,
    comp: &CoincidenceComponent,
    opts: &CoincidenceOptions,
) -> Result<ComponentResult, CoincidenceError> {
    let CoincidenceComponent::SubmanifoldComponent { basepoint, tangent, frame } = comp else {
        return Err(CoincidenceError::UnsupportedComponent(comp.to_string()));
    };
    let (m, n) = (f.domain.dimension(), f.codomain.dimension());
    if m <= n {
        return Err(CoincidenceError::Unsupported(format!(
            "positive-dimensional component {comp} of maps with m = {m}, n = {n}"
        )));
    }
    if !f.domain.is_torus() || !f.codomain.is_torus() {
        return Err(CoincidenceError::Unsupported("slices are only built on tori".into()));
    }
    if tangent.len() != m - n || frame.len() != n {
        return Err(CoincidenceError::FrameNotTransverse(format!(
            "component {comp} has dimension {}, expected m - n = {}",
            tangent.len(),
            m - n
        )));
    }
    let mut frame = frame.clone();
    let full = RealMatrix::from_fn(m, m, |i, j| if j < n { frame[j][i] as f64 } else { tangent[j - n][i] as f64 });
    let det = determinant(&full);
    if det.abs() < 0.5 {
        return Err(CoincidenceError::FrameNotTransverse(format!("frame and tangent of {comp} are dependent")));
    }
    if det < 0.0 {
        frame[0].iter_mut().for_each(|x| *x = -*x);
    }
    let p = to_f64(basepoint);
    let frame_f: Vec<Vec<f64>> = frame.iter().map(|v| v.iter().map(|&x| x as f64).collect()).collect();
    let (fc, gc) = (f.clone(), g.clone());
    let h: ZeroMap = Arc::new(move |t: &[f64]| {
        let x: Vec<f64> = (0..p.len()).map(|i| p[i] + frame_f.iter().zip(t).map(|(v, s)| v[i] * s).sum::<f64>()).collect();
        let pt = ChartPoint::new(Chart::Angle, x);
        let a = fc.eval_in(&pt, Some(Chart::Angle)).map_err(|e| e.to_string())?.coords;
        let b = gc.eval_in(&pt, Some(Chart::Angle)).map_err(|e| e.to_string())?.coords;
        Ok(wrapped_diff(&b, &a))
    });
    let origin = vec![0.0; n];
    let (jac, regular) = match linear_difference(f, g) {
        Some(c) => {
            let j = RealMatrix::from_fn(n, n, |i, j| (0..m).map(|k| (c[i][k] * frame[j][k]) as f64).sum());
            let regular = is_nondegenerate(&j, &opts.degree);
            (j, regular)
        }
        None => {
            let j = fd_jacobian(&origin, n, |t| h(t), plain_diff).map_err(DegreeError::Evaluation)?.matrix;
            let regular = numerically_nondegenerate(&j, opts);
            (j, regular)
        }
    };
    let norm = jac.norm();
    let radius = if norm > 0.0 { (0.5 / norm).min(0.25) } else { 0.25 };
    let prob = problem_with_shrinking(h, origin, radius, opts)?;
    let result = degree_chain(&prob, &jac, regular, opts)?;
    let confirmation = confirm(&prob, &result, &comp.to_string(), opts)?;
    let class = subtorus_class(m, tangent).into_iter().map(|c| c * result.value).collect();
    Ok(ComponentResult {
        component: comp.clone(),
        kind: ResultKind::ClassCoefficient,
        value: result.value,
        method: result.method,
        raw: result.raw,
        residual: result.residual,
        radius: prob.radius(),
        chart_sign: 1,
        confirmation,
        class: Some(class),
    })
}

// Distance between two points in the chart of `p`, periodic on tori.
fn chart_distance(f: &SmoothMapSpec, p: &ChartPoint, q: &ChartPoint) -> Option<f64> {
    let qc = f.domain.to_chart(q, p.chart).ok()?;
    let d: Vec<f64> = if p.chart == Chart::Angle { wrapped_diff(&qc, &p.coords) } else { plain_diff(&qc, &p.coords) };
    Some(crate::numeric::norm(&d))
}

fn problem_with_shrinking(
    h: ZeroMap,
    center: Vec<f64>,
    radius: f64,
    opts: &CoincidenceOptions,
) -> Result<LocalZeroProblem, CoincidenceError> {
    let mut r = radius;
    let mut last = None;
    for _ in 0..12 {
        match LocalZeroProblem::new(h.clone(), center.clone(), r, &opts.degree) {
            Ok(p) => return Ok(p),
            Err(e @ (DegreeError::BoundaryZero { .. } | DegreeError::Evaluation(_))) => {
                last = Some(e);
                r /= 2.0;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Err(last.expect("at least one attempt").into())
}

fn degree_chain(
    prob: &LocalZeroProblem,
    jac: &RealMatrix,
    regular: bool,
    opts: &CoincidenceOptions,
) -> Result<DegreeResult, CoincidenceError> {
    let cfg = &opts.degree;
    if regular {
        return Ok(local_degree_jacobian(prob, jac, cfg)?);
    }
    if prob.dimension() == 2 {
        if let Ok(r) = winding_number(prob, cfg.winding_samples, cfg) {
            return Ok(r);
        }
    }
    let mut last = match local_degree_kronecker(prob, cfg.quadrature_order, cfg) {
        Ok(r) => return Ok(r),
        Err(e) => e,
    };
    if prob.dimension() <= 3 {
        match local_degree_oracle(prob, cfg.oracle_grid, cfg) {
            Ok(r) => return Ok(r),
            Err(e) => last = e,
        }
    }
    Err(last.into())
}

fn confirm(
    prob: &LocalZeroProblem,
    result: &DegreeResult,
    label: &str,
    opts: &CoincidenceOptions,
) -> Result<Option<(DegreeMethod, i64)>, CoincidenceError> {
    if !opts.confirm || result.method == DegreeMethod::JacobianSign || result.method == DegreeMethod::Oracle || prob.dimension() > 3 {
        return Ok(None);
    }
    let check = local_degree_oracle(prob, opts.degree.oracle_grid, &opts.degree)?;
    if check.value != result.value {
        return Err(CoincidenceError::IndexDisagreement {
            point: label.to_string(),
            first: result.method,
            a: result.value,
            second: DegreeMethod::Oracle,
            b: check.value,
        });
    }
    Ok(Some((DegreeMethod::Oracle, check.value)))
}

#[cfg(test)]
mod tests {
    use super::super::{find_coincidence_components, verify_residue_formula, pair_model, Verdict, GlobalInvariant};
    use super::*;
    use crate::analytic::{parse_map_expr, ManifoldDescriptor, RatPoly};

    fn z_pow(k: usize) -> SmoothMapSpec {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        SmoothMapSpec::sphere_rational(RatPoly::from_integers(&c), RatPoly::from_integers(&[1])).unwrap()
    }

    #[test]
    fn sphere_indices() {
        let opts = CoincidenceOptions::default();
        let (f, g) = (z_pow(2), z_pow(3));
        let comps = find_coincidence_components(&f, &g, &opts).unwrap();
        let mut got = Vec::new();
        for (i, c) in comps.iter().enumerate() {
            let others: Vec<_> = comps.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, c)| c).collect();
            let r = local_coincidence_index(&f, &g, c, &others, &opts).unwrap();
            got.push((r.value, r.method));
            if r.method != DegreeMethod::JacobianSign {
                assert!(r.residual < 1e-6);
                assert_eq!(r.confirmation, Some((DegreeMethod::Oracle, r.value)));
            }
        }
        assert_eq!(
            got,
            vec![(2, DegreeMethod::Winding), (1, DegreeMethod::JacobianSign), (2, DegreeMethod::Winding)]
        );
    }

    #[test]
    fn residue_formula_on_s2() {
        let opts = CoincidenceOptions::default();
        let (f, g) = (z_pow(2), z_pow(3));
        let model = pair_model(&f, &g, &opts.degree).unwrap();
        let rep = verify_residue_formula(&f, &g, Some((&model, "f", "g")), &opts).unwrap();
        assert_eq!(rep.global, GlobalInvariant::Number(5));
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!(rep.symmetry.unwrap().holds);
    }

    #[test]
    fn slice_coefficients() {
        let t2 = ManifoldDescriptor::torus(2);
        let s1 = ManifoldDescriptor::torus(1);
        let opts = CoincidenceOptions::default();
        let f = parse_map_expr("x", &t2, &s1).unwrap();
        for (g, count) in [("2*x", 1), ("3*x", 2)] {
            let g = parse_map_expr(g, &t2, &s1).unwrap();
            let comps = find_coincidence_components(&f, &g, &opts).unwrap();
            assert_eq!(comps.len(), count);
            for c in &comps {
                let r = submanifold_class_coefficient(&f, &g, c, &opts).unwrap();
                assert_eq!(r.value, 1);
            }
            let rep = verify_residue_formula(&f, &g, None, &opts).unwrap();
            assert_eq!(rep.verdict, Verdict::Pass, "{rep:?}");
        }
        // f = g: the whole torus coincides
        let comps = find_coincidence_components(&f, &f, &opts).unwrap();
        assert_eq!(comps[0].dimension(), 2);
        assert!(matches!(
            submanifold_class_coefficient(&f, &f, &comps[0], &opts),
            Err(CoincidenceError::FrameNotTransverse(_))
        ));
    }

    #[test]
    fn degenerate_circle_index() {
        // on S^1 = T^1, g - f = sin(2πx)^2/(4π): a double zero at 0 and at 1/2, index 0
        let t1 = ManifoldDescriptor::torus(1);
        let f = parse_map_expr("x", &t1, &t1).unwrap();
        let g = parse_map_expr("x + sin(2*pi*x)*sin(2*pi*x)/(4*pi)", &t1, &t1).unwrap();
        let opts = CoincidenceOptions::default();
        let comps = find_coincidence_components(&f, &g, &opts).unwrap();
        assert_eq!(comps.len(), 2);
        for c in &comps {
            let r = local_coincidence_index(&f, &g, c, &[], &opts).unwrap();
            assert_eq!((r.value, r.method), (0, DegreeMethod::Kronecker));
        }
    }
}
