use std::cmp::Ordering;

use rayon::prelude::*;

use super::lattice::{solve_congruence, to_f64};
use super::{linear_difference, CoincidenceComponent, CoincidenceError, CoincidenceOptions};
use crate::analytic::{Chart, ChartPoint, ManifoldDescriptor, SmoothMapSpec};
use crate::degree::is_nondegenerate;
use crate::linalg::Rational;
use crate::numeric::{fd_jacobian, RealMatrix, newton, norm, plain_diff, wrap_unit, wrapped_diff};

/// `g - f` at a point of `chart`, both read in the codomain chart `target`.
pub(super) fn difference(
    f: &SmoothMapSpec,
    g: &SmoothMapSpec,
    chart: Chart,
    target: Chart,
    x: &[f64],
) -> Result<Vec<f64>, String> {
    let p = ChartPoint::new(chart, x.to_vec());
    let a = f.eval_in(&p, Some(target)).map_err(|e| e.to_string())?.coords;
    let b = g.eval_in(&p, Some(target)).map_err(|e| e.to_string())?.coords;
    Ok(if target == Chart::Angle { wrapped_diff(&b, &a) } else { plain_diff(&b, &a) })
}

/// Codomain chart used around `p`: the chart containing `f(p)` in its unit
/// ball (the fundamental domain on tori).
pub(super) fn target_chart(f: &SmoothMapSpec, p: &ChartPoint) -> Result<Chart, CoincidenceError> {
    Ok(f.eval_in(p, None)?.chart)
}

/// Coincidence set of `f` and `g`. Linear torus pairs are solved exactly;
/// other pairs with `m = n` on tori or spheres are found by a grid scan of
/// `g - f` followed by Newton polishing and de-duplication.
pub fn find_coincidence_components(
    f: &SmoothMapSpec,
    g: &SmoothMapSpec,
    opts: &CoincidenceOptions,
) -> Result<Vec<CoincidenceComponent>, CoincidenceError> {
    let (domain, codomain) = (f.domain.normalized(), f.codomain.normalized());
    if domain != g.domain.normalized() || codomain != g.codomain.normalized() {
        return Err(CoincidenceError::SpaceMismatch);
    }
    let (m, n) = (domain.dimension(), codomain.dimension());
    if m < n {
        return Err(CoincidenceError::DimensionMismatch { m, n });
    }
    if domain.is_torus() && codomain.is_torus() {
        if let Some(c) = linear_difference(f, g) {
            return lattice_components(f, g, &c);
        }
    }
    if m != n {
        return Err(CoincidenceError::Unsupported(format!(
            "coincidence sets of non-linear maps {} -> {} (m > n)",
            domain, codomain
        )));
    }
    match (&domain, &codomain) {
        (ManifoldDescriptor::Torus(_), ManifoldDescriptor::Torus(_))
        | (ManifoldDescriptor::Sphere(_), ManifoldDescriptor::Sphere(_)) => scan(f, g, &domain, opts),
        _ => Err(CoincidenceError::Unsupported(format!("coincidence detection for maps {domain} -> {codomain}"))),
    }
}

fn lattice_components(
    f: &SmoothMapSpec,
    g: &SmoothMapSpec,
    c: &[Vec<i64>],
) -> Result<Vec<CoincidenceComponent>, CoincidenceError> {
    let (_, cf) = f.linear_data().expect("linear pair");
    let (_, cg) = g.linear_data().expect("linear pair");
    // B x + c_g ≡ A x + c_f
    let d: Vec<Rational> = cf.iter().zip(&cg).map(|(a, b)| a - b).collect();
    let sol = solve_congruence(c, &d)?;
    let m = f.domain.dimension();
    Ok(sol
        .basepoints
        .into_iter()
        .map(|bp| {
            if sol.rank == m {
                CoincidenceComponent::IsolatedPoint {
                    point: ChartPoint::new(Chart::Angle, to_f64(&bp)),
                    exact: Some(bp),
                    nondegenerate: true,
                }
            } else {
                CoincidenceComponent::SubmanifoldComponent {
                    basepoint: bp,
                    tangent: sol.tangent.clone(),
                    frame: sol.frame.clone(),
                }
            }
        })
        .collect())
}

fn default_grid(m: usize) -> usize {
    match m {
        1 => 400,
        2 => 40,
        3 => 14,
        _ => 8,
    }
}

fn seeds(manifold: &ManifoldDescriptor, grid: usize) -> Vec<ChartPoint> {
    let m = manifold.dimension();
    let (charts, lo, hi) = if manifold.is_torus() {
        (vec![Chart::Angle], 0.0, 1.0)
    } else {
        (vec![Chart::Z, Chart::W], -1.1, 1.1)
    };
    let cell = (hi - lo) / grid as f64;
    let mut out = Vec::new();
    for chart in charts {
        for idx in 0..grid.pow(m as u32) {
            let mut k = idx;
            let x: Vec<f64> = (0..m)
                .map(|_| {
                    let i = k % grid;
                    k /= grid;
                    lo + cell * (i as f64 + 0.5)
                })
                .collect();
            if chart == Chart::Angle || norm(&x) <= hi {
                out.push(ChartPoint::new(chart, x));
            }
        }
    }
    out
}

// Sphere points go to the z chart when |z| <= 1, otherwise to the w chart.
fn canonical(manifold: &ManifoldDescriptor, p: ChartPoint) -> Result<ChartPoint, CoincidenceError> {
    match p.chart {
        Chart::Angle => Ok(ChartPoint::new(
            Chart::Angle,
            p.coords.iter().map(|&t| wrap_unit(t)).map(|t| if t > 1.0 - 1e-12 { 0.0 } else { t }).collect(),
        )),
        Chart::Z if norm(&p.coords) <= 1.0 => Ok(p),
        Chart::W if norm(&p.coords) < 1.0 => Ok(p),
        Chart::Z => Ok(ChartPoint::new(Chart::W, manifold.to_chart(&p, Chart::W)?)),
        Chart::W => Ok(ChartPoint::new(Chart::Z, manifold.to_chart(&p, Chart::Z)?)),
    }
}

fn polish(
    f: &SmoothMapSpec,
    g: &SmoothMapSpec,
    manifold: &ManifoldDescriptor,
    seed: &ChartPoint,
    opts: &CoincidenceOptions,
) -> Option<(ChartPoint, f64)> {
    let target = target_chart(f, seed).ok()?;
    let tol = opts.degree.newton_tolerance;
    let (x, _) = newton(&seed.coords, tol, 100, |x| difference(f, g, seed.chart, target, x))?;
    let p = canonical(manifold, ChartPoint::new(seed.chart, x)).ok()?;
    // re-verify in the canonical charts
    let t = target_chart(f, &p).ok()?;
    let res = norm(&difference(f, g, p.chart, t, &p.coords).ok()?);
    (res <= tol.max(1e-10)).then_some((p, res))
}

fn scan(
    f: &SmoothMapSpec,
    g: &SmoothMapSpec,
    manifold: &ManifoldDescriptor,
    opts: &CoincidenceOptions,
) -> Result<Vec<CoincidenceComponent>, CoincidenceError> {
    let grid = opts.grid.unwrap_or_else(|| default_grid(manifold.dimension()));
    let found: Vec<Option<(ChartPoint, f64)>> =
        seeds(manifold, grid).par_iter().map(|s| polish(f, g, manifold, s, opts)).collect();

    let mut roots: Vec<(ChartPoint, f64)> = Vec::new();
    for (p, res) in found.into_iter().flatten() {
        let mut merged = false;
        for r in roots.iter_mut() {
            if manifold.distance(&r.0, &p)? < opts.dedup_radius {
                if res < r.1 {
                    *r = (p.clone(), res);
                }
                merged = true;
                break;
            }
        }
        if !merged {
            roots.push((p, res));
        }
    }
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            let d = manifold.distance(&a.0, &b.0)?;
            if d < 10.0 * opts.dedup_radius {
                return Err(CoincidenceError::DetectionInconclusive(format!(
                    "zeros {} and {} are {d:.2e} apart, close to the dedup radius {:.1e}",
                    a.0, b.0, opts.dedup_radius
                )));
            }
        }
    }
    let mut out = Vec::with_capacity(roots.len());
    for (p, _) in roots {
        let target = target_chart(f, &p)?;
        let jac = fd_jacobian(&p.coords, manifold.dimension(), |x| difference(f, g, p.chart, target, x), plain_diff)
            .map_err(CoincidenceError::DetectionInconclusive)?
            .matrix;
        let nondegenerate = numerically_nondegenerate(&jac, opts);
        out.push(CoincidenceComponent::IsolatedPoint { point: p, exact: None, nondegenerate });
    }
    out.sort_by(compare_points);
    Ok(out)
}

/// Non-degeneracy test for numerically located zeros. Newton stalls near
/// `sqrt(tol)` at a double zero, so the Jacobian there is only small, not
/// singular; the threshold is loosened accordingly.
pub(super) fn numerically_nondegenerate(jac: &RealMatrix, opts: &CoincidenceOptions) -> bool {
    let mut cfg = opts.degree.clone();
    cfg.nondegeneracy = cfg.nondegeneracy.max(NUMERIC_NONDEGENERACY);
    is_nondegenerate(jac, &cfg)
}

const NUMERIC_NONDEGENERACY: f64 = 1e-4;

fn compare_points(a: &CoincidenceComponent, b: &CoincidenceComponent) -> Ordering {
    match (a, b) {
        (CoincidenceComponent::IsolatedPoint { point: p, .. }, CoincidenceComponent::IsolatedPoint { point: q, .. }) => {
            let key = |c: &ChartPoint| c.coords.iter().map(|v| (v * 1e6).round() as i64).collect::<Vec<_>>();
            p.chart.cmp(&q.chart).then_with(|| key(p).cmp(&key(q)))
        }
        _ => Ordering::Equal,
    }
}
