//! Quadrature rules on the circle, the interval and the sphere.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
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

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Equispaced angles `2πj/n`, `j = 0..n`, with the periodic trapezoid
/// weight `2π/n`.
pub fn periodic_trapezoid(n: usize) -> (Vec<f64>, f64) {
    let step = 2.0 * PI / n as f64;
    ((0..n).map(|j| j as f64 * step).collect(), step)
}

/// Product rule on the unit sphere: Gauss–Legendre in `cos θ` times the
/// periodic trapezoid in azimuth. Returns `(unit vector, weight)` pairs
/// whose weights sum to `4π`.
pub fn sphere_product_rule(n: usize) -> Vec<([f64; 3], f64)> {
    let (mu, wmu) = gauss_legendre(n);
    let (phis, wphi) = periodic_trapezoid(n);
    let mut out = Vec::with_capacity(n * n);
    for (&c, &wc) in mu.iter().zip(&wmu) {
        let s = (1.0 - c * c).max(0.0).sqrt();
        for &phi in &phis {
            let (sp, cp) = phi.sin_cos();
            out.push(([s * cp, s * sp, c], wc * wphi));
        }
    }
    out
}
