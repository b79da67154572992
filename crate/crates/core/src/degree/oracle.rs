use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{is_nondegenerate, DegreeConfig, DegreeError, DegreeMethod, DegreeResult, LocalZeroProblem};
use crate::numeric::{determinant, distance, fd_jacobian, newton, norm, plain_diff};

/// Signed count of preimages of a small regular value `v` inside the ball.
///
/// Seeds are a jittered `grid^m` lattice over the ball, each polished by
/// Newton's method on `h - v`; roots are de-duplicated and weighted by
/// `sgn det J`. A near-singular Jacobian at any root triggers a retry with a
/// fresh `v`.
pub fn local_degree_oracle(prob: &LocalZeroProblem, grid: usize, cfg: &DegreeConfig) -> Result<DegreeResult, DegreeError> {
    let m = prob.dimension();
    if m > 3 {
        return Err(DegreeError::Dimension { method: DegreeMethod::Oracle, got: m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let grid = grid.max(2);
    for _ in 0..=cfg.oracle_retries {
        let v = regular_value(prob, &mut rng);
        let seeds = seeds(prob, grid, &mut rng);
        if let Some((count, preimages)) = signed_count(prob, &v, &seeds, cfg)? {
            let mut diag = prob.diagnostics();
            diag.preimages = Some(preimages);
            return Ok(DegreeResult {
                value: count,
                raw: count as f64,
                residual: 0.0,
                method: DegreeMethod::Oracle,
                diagnostics: diag,
            });
        }
    }
    Err(DegreeError::OracleInconclusive { attempts: cfg.oracle_retries + 1 })
}

// Random direction, magnitude between 5% and 20% of min ‖h‖ on the boundary.
fn regular_value(prob: &LocalZeroProblem, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let m = prob.dimension();
    loop {
        let d: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = norm(&d);
        if n > 0.1 && n <= 1.0 {
            let size = prob.boundary_min() * rng.gen_range(0.05..0.2);
            return d.into_iter().map(|x| x * size / n).collect();
        }
    }
}

fn seeds(prob: &LocalZeroProblem, grid: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let m = prob.dimension();
    let r = prob.radius();
    let cell = 2.0 * r / grid as f64;
    let total = grid.pow(m as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut k = idx;
        let mut offset = Vec::with_capacity(m);
        for _ in 0..m {
            let i = k % grid;
            k /= grid;
            let jitter: f64 = rng.gen_range(-0.25..0.25);
            offset.push(-r + cell * (i as f64 + 0.5 + jitter));
        }
        if norm(&offset) < r {
            out.push(prob.center().iter().zip(&offset).map(|(c, o)| c + o).collect());
        }
    }
    out
}

// `None` when a root looks non-regular.
fn signed_count(
    prob: &LocalZeroProblem,
    v: &[f64],
    seeds: &[Vec<f64>],
    cfg: &DegreeConfig,
) -> Result<Option<(i64, usize)>, DegreeError> {
    let shifted = |x: &[f64]| -> Result<Vec<f64>, String> {
        let h = prob.eval(x).map_err(|e| e.to_string())?;
        Ok(h.iter().zip(v).map(|(a, b)| a - b).collect())
    };
    let tol = cfg.newton_tolerance * (1.0 + prob.scale());
    let found: Vec<Option<Vec<f64>>> = seeds
        .par_iter()
        .map(|s| {
            newton(s, tol, 80, shifted)
                .map(|(x, _)| x)
                .filter(|x| distance(x, prob.center()) < prob.radius())
        })
        .collect();
    let dedup = 1e-6 * prob.radius();
    let mut roots: Vec<Vec<f64>> = Vec::new();
    for x in found.into_iter().flatten() {
        if roots.iter().all(|r| distance(r, &x) > dedup) {
            roots.push(x);
        }
    }
    let mut count = 0;
    for x in &roots {
        let jac = fd_jacobian(x, prob.dimension(), shifted, plain_diff).map_err(DegreeError::Evaluation)?.matrix;
        if !is_nondegenerate(&jac, &DegreeConfig { nondegeneracy: 1e-6, ..cfg.clone() }) {
            return Ok(None);
        }
        count += if determinant(&jac) > 0.0 { 1 } else { -1 };
    }
    Ok(Some((count, roots.len())))
}

#[cfg(test)]
mod tests {
    use super::super::test_support::{linear, problem};
    use super::*;
    use crate::numeric::RealMatrix;

    #[test]
    fn spec_examples() {
        let cfg = DegreeConfig::default();
        let id = local_degree_oracle(&linear(RealMatrix::identity(2, 2)), 16, &cfg).unwrap();
        assert_eq!((id.value, id.diagnostics.preimages), (1, Some(1)));
        let z2 = problem(|x| vec![x[0] * x[0] - x[1] * x[1], 2.0 * x[0] * x[1]], 2, 0.5);
        let r = local_degree_oracle(&z2, 16, &cfg).unwrap();
        assert_eq!((r.value, r.diagnostics.preimages), (2, Some(2)));
        let sq = problem(|x| vec![x[0] * x[0]], 1, 0.5);
        assert_eq!(local_degree_oracle(&sq, 16, &cfg).unwrap().value, 0);
    }

    #[test]
    fn agrees_with_kronecker_in_three_dimensions() {
        let cfg = DegreeConfig::default();
        let p = problem(|x| vec![x[0] * x[0] - x[1] * x[1], 2.0 * x[0] * x[1], -x[2]], 3, 0.5);
        assert_eq!(local_degree_oracle(&p, 12, &cfg).unwrap().value, -2);
    }

    #[test]
    fn seed_does_not_change_the_count() {
        let p = problem(|x| vec![x[0].powi(3) - 3.0 * x[0] * x[1] * x[1], 3.0 * x[0] * x[0] * x[1] - x[1].powi(3)], 2, 0.5);
        for seed in [0, 1, 2] {
            let cfg = DegreeConfig { seed, ..Default::default() };
            assert_eq!(local_degree_oracle(&p, 16, &cfg).unwrap().value, 3);
        }
    }
}
