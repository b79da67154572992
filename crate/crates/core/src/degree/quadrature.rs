//! Gauss–Legendre rules and the iterated-angle parametrization of spheres.

use std::f64::consts::PI;

use crate::numeric::{determinant, fd_jacobian, plain_diff};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// nodes in increasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "quadrature order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    x.into_iter().zip(w).map(|(x, w)| (mid + half * x, half * w)).collect()
}

/// Γ(k/2) for a positive integer `k`.
fn gamma_half(k: usize) -> f64 {
    match k {
        1 => PI.sqrt(),
        2 => 1.0,
        _ => (k as f64 / 2.0 - 1.0) * gamma_half(k - 2),
    }
}

/// Area of the unit sphere `S^k ⊂ R^{k+1}`: `2 π^{(k+1)/2} / Γ((k+1)/2)`.
/// `S^0` has two points.
pub fn sphere_area(k: usize) -> f64 {
    2.0 * PI.powf((k as f64 + 1.0) / 2.0) / gamma_half(k + 1)
}

/// Unit vector in `R^m` with iterated angles `t` (`m - 1` of them):
/// `t_1..t_{m-2} ∈ [0, π]`, `t_{m-1} ∈ [0, 2π]`.
pub fn sphere_point(t: &[f64]) -> Vec<f64> {
    let m = t.len() + 1;
    let mut u = vec![0.0; m];
    let mut s = 1.0;
    for (i, ti) in t.iter().enumerate() {
        u[i] = s * ti.cos();
        s *= ti.sin();
    }
    u[m - 1] = s;
    u
}

/// `|det[u, ∂u/∂t_1, ..]| = Π_k sin^{m-1-k}(t_k)`.
pub fn sphere_volume_factor(t: &[f64]) -> f64 {
    let m = t.len() + 1;
    t.iter().enumerate().map(|(k, tk)| tk.sin().powi((m - 2 - k) as i32)).product()
}

/// Tensor-product rule on the angle cube of `S^{m-1}`: `order` nodes on each
/// `[0, π]` factor and `2·order` on `[0, 2π]`.
pub fn angle_rule(m: usize, order: usize) -> Vec<(Vec<f64>, f64)> {
    let mut rule = vec![(Vec::new(), 1.0)];
    for k in 0..m.saturating_sub(1) {
        let factor = if k + 2 == m { gauss_legendre_on(2 * order, 0.0, 2.0 * PI) } else { gauss_legendre_on(order, 0.0, PI) };
        rule = rule
            .into_iter()
            .flat_map(|(t, w)| {
                factor.iter().map(move |&(x, v)| {
                    let mut t = t.clone();
                    t.push(x);
                    (t, w * v)
                })
            })
            .collect();
    }
    rule
}

/// Sign of `det[u, ∂u/∂t]` for the parametrization, so that integrands can
/// be normalized to the standard orientation of `S^{m-1}`.
pub fn parametrization_sign(m: usize) -> f64 {
    if m < 2 {
        return 1.0;
    }
    let t: Vec<f64> = (0..m - 1).map(|k| if k + 2 == m { 0.7 } else { 1.1 }).collect();
    let d = fd_jacobian(&t, m, |t| Ok(sphere_point(t)), plain_diff).expect("closed-form parametrization").matrix;
    let mut full = d.clone().insert_column(0, 0.0);
    for (i, v) in sphere_point(&t).into_iter().enumerate() {
        full[(i, 0)] = v;
    }
    determinant(&full).signum()
}
