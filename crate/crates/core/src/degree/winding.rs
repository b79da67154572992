use std::f64::consts::{FRAC_PI_2, TAU};

use super::{snap, snapped, DegreeConfig, DegreeError, DegreeMethod, DegreeResult, LocalZeroProblem};
use crate::numeric::pairwise_sum;

/// Winding number of `h` around the boundary circle (m = 2), accumulating
/// the continuous argument. Samples double from `samples` until two
/// consecutive counts agree and every step turns by less than `π/2`.
pub fn winding_number(prob: &LocalZeroProblem, samples: usize, cfg: &DegreeConfig) -> Result<DegreeResult, DegreeError> {
    if prob.dimension() != 2 {
        return Err(DegreeError::Dimension { method: DegreeMethod::Winding, got: prob.dimension() });
    }
    let mut n = samples.max(8);
    let mut prev: Option<i64> = None;
    let mut raw = f64::NAN;
    for _ in 0..=cfg.max_budget {
        let (total, max_step) = accumulate(prob, n)?;
        raw = total / TAU;
        let value = snap(raw).map(|(v, _)| v);
        if max_step < FRAC_PI_2 && value.is_some() && prev == value {
            let mut diag = prob.diagnostics();
            diag.samples = Some(n);
            return snapped(raw, DegreeMethod::Winding, diag, cfg);
        }
        prev = if max_step < FRAC_PI_2 { value } else { None };
        n *= 2;
    }
    let residual = snap(raw).map_or(0.5, |(_, r)| r);
    Err(DegreeError::NoConvergence { method: DegreeMethod::Winding, raw, residual })
}

fn accumulate(prob: &LocalZeroProblem, n: usize) -> Result<(f64, f64), DegreeError> {
    let pts = (0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            prob.eval(&prob.boundary_point(&[t.cos(), t.sin()]))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let steps: Vec<f64> = (0..n)
        .map(|k| {
            let (a, b) = (&pts[k], &pts[(k + 1) % n]);
            let cross = a[0] * b[1] - a[1] * b[0];
            let dot = a[0] * b[0] + a[1] * b[1];
            cross.atan2(dot)
        })
        .collect();
    let max_step = steps.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    Ok((pairwise_sum(&steps), max_step))
}

#[cfg(test)]
mod tests {
    use super::super::test_support::problem;
    use super::*;
    use num_complex::Complex64;

    fn complex(f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static, r: f64) -> LocalZeroProblem {
        problem(
            move |x| {
                let w = f(Complex64::new(x[0], x[1]));
                vec![w.re, w.im]
            },
            2,
            r,
        )
    }

    #[test]
    fn powers_and_conjugates() {
        let cfg = DegreeConfig::default();
        for k in 1..=5 {
            let p = complex(move |z| z.powu(k), 0.5);
            assert_eq!(winding_number(&p, 64, &cfg).unwrap().value, k as i64);
            let q = complex(move |z| z.conj().powu(k), 0.5);
            assert_eq!(winding_number(&q, 64, &cfg).unwrap().value, -(k as i64));
        }
    }

    #[test]
    fn degenerate_coincidence_example() {
        let cfg = DegreeConfig::default();
        let p = complex(|z| z.powu(3) - z.powu(2), 0.5);
        let r = winding_number(&p, 64, &cfg).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.residual < 1e-6);
    }

    #[test]
    fn rejects_other_dimensions() {
        let p = problem(|x| x.to_vec(), 3, 0.5);
        assert!(matches!(winding_number(&p, 64, &DegreeConfig::default()), Err(DegreeError::Dimension { .. })));
    }
}
