use alloc::vec::Vec;

use crate::math;

/// Gauss-Legendre nodes and weights on `[0, 1]`, nodes ascending.
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = math::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if math::abs(dx) <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    let mut nodes = Vec::with_capacity(n);
    for &(x, w) in out.iter().rev() {
        nodes.push((0.5 * (1.0 - x), 0.5 * w));
    }
    let skip_middle = n % 2 == 1;
    for (j, &(x, w)) in out.iter().enumerate() {
        if skip_middle && j == out.len() - 1 {
            continue;
        }
        nodes.push((0.5 * (1.0 + x), 0.5 * w));
    }
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    nodes
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Midpoint nodes and weights on `[0, 1]`.
pub fn midpoint_unit(n: usize) -> Vec<(f64, f64)> {
    let h = 1.0 / n as f64;
    (0..n).map(|j| ((j as f64 + 0.5) * h, h)).collect()
}
