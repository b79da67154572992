//! Floating-point helpers shared by the analytic backend, the degree engine
//! and coincidence detection.

use nalgebra::DMatrix;

/// Real matrix type used for Jacobians.
pub type RealMatrix = DMatrix<f64>;

/// Jacobian together with an estimate of its absolute error.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianEstimate {
    pub matrix: RealMatrix,
    pub error: f64,
}

impl JacobianEstimate {
    pub fn exact(matrix: RealMatrix) -> Self {
        Self { matrix, error: 0.0 }
    }
}

/// Base finite-difference step for a coordinate of magnitude `x`.
pub fn fd_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * (1.0 + x.abs())
}

/// Central differences with one Richardson level.
///
/// `eval` maps a point to values; `diff(a, b)` returns `a - b` (letting
/// periodic targets unwrap across the fundamental domain).
pub fn fd_jacobian<E, D>(x: &[f64], outputs: usize, mut eval: E, diff: D) -> Result<JacobianEstimate, String>
where
    E: FnMut(&[f64]) -> Result<Vec<f64>, String>,
    D: Fn(&[f64], &[f64]) -> Vec<f64>,
{
    let m = x.len();
    let mut jac = RealMatrix::zeros(outputs, m);
    let mut err: f64 = 0.0;
    let mut p = x.to_vec();
    for j in 0..m {
        let h = fd_step(x[j]);
        let mut central = |step: f64, p: &mut Vec<f64>| -> Result<Vec<f64>, String> {
            p[j] = x[j] + step;
            let plus = eval(p)?;
            p[j] = x[j] - step;
            let minus = eval(p)?;
            p[j] = x[j];
            Ok(diff(&plus, &minus).into_iter().map(|d| d / (2.0 * step)).collect())
        };
        let coarse = central(h, &mut p)?;
        let fine = central(h / 2.0, &mut p)?;
        for i in 0..outputs {
            let extrapolated = (4.0 * fine[i] - coarse[i]) / 3.0;
            jac[(i, j)] = extrapolated;
            err = err.max((extrapolated - fine[i]).abs());
        }
    }
    Ok(JacobianEstimate { matrix: jac, error: err })
}

pub fn plain_diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a - b` reduced to `(-1/2, 1/2]` componentwise.
pub fn wrapped_diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| wrap_centered(x - y)).collect()
}

/// Representative of `t mod 1` in `(-1/2, 1/2]`.
pub fn wrap_centered(t: f64) -> f64 {
    let r = t - t.round();
    if r <= -0.5 {
        r + 1.0
    } else {
        r
    }
}

/// Representative of `t mod 1` in `[0, 1)`.
pub fn wrap_unit(t: f64) -> f64 {
    let r = t - t.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Pairwise summation in fixed index order; bit-reproducible for a given input.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub fn determinant(m: &RealMatrix) -> f64 {
    if m.nrows() == 0 {
        1.0
    } else {
        m.determinant()
    }
}

/// Largest absolute entry.
pub fn max_abs(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
}

/// Damped Newton iteration for `F(x) = 0` with finite-difference Jacobians.
///
/// Returns the final iterate and residual norm once `‖F‖ <= tol`, or `None`
/// if the iteration stalls, leaves the domain of `F`, or runs out of steps.
pub fn newton<F>(x0: &[f64], tol: f64, max_iter: usize, mut f: F) -> Option<(Vec<f64>, f64)>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>, String>,
{
    let mut x = x0.to_vec();
    let mut fx = f(&x).ok()?;
    let mut res = norm(&fx);
    for _ in 0..max_iter {
        if res <= tol {
            return Some((x, res));
        }
        let jac = fd_jacobian(&x, fx.len(), &mut f, plain_diff).ok()?.matrix;
        let rhs = nalgebra::DVector::from_iterator(fx.len(), fx.iter().map(|v| -v));
        let step = jac.lu().solve(&rhs)?;
        let mut lambda = 1.0;
        let mut improved = false;
        while lambda > 1e-4 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a + lambda * s).collect();
            if let Ok(ft) = f(&trial) {
                let r = norm(&ft);
                if r < res {
                    x = trial;
                    fx = ft;
                    res = r;
                    improved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (res <= tol).then_some((x, res))
}
