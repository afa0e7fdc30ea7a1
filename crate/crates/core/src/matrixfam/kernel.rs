use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flags::{Flag, Flags};
use crate::math;
use crate::quadrature::{QuadratureGrid, EDGE_SHARE};
use crate::Point;

fn one() -> f64 {
    1.0
}

/// Non-negative kernel `Phi` of a Hausdorff operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    Zero,
    /// `|t|^sigma` on `r_inner < |t| <= r_outer`
    PowerAnnulus { sigma: f64, r_inner: f64, r_outer: f64 },
    /// `coefficient |t|^norm_power prod t_i^{e_i}` on the unit cube `(0, 1]^n`
    PowerCube {
        #[serde(default = "one")]
        coefficient: f64,
        #[serde(default)]
        norm_power: f64,
        #[serde(default)]
        coord_powers: Vec<f64>,
    },
    /// `|t|^sigma exp(-|t|^2)`
    GaussianTail { sigma: f64 },
}

impl KernelSpec {
    pub fn check(&self, dim: usize) -> Result<()> {
        match self {
            KernelSpec::PowerAnnulus { r_inner, r_outer, .. } if !(0.0 <= *r_inner && r_inner < r_outer) => {
                Err(Error::invalid("r_inner", "need 0 <= r_inner < r_outer"))
            }
            KernelSpec::PowerCube { coefficient, coord_powers, .. } => {
                if !(*coefficient >= 0.0) {
                    Err(Error::invalid("coefficient", "kernel must be non-negative"))
                } else if !coord_powers.is_empty() && coord_powers.len() != dim {
                    Err(Error::DimensionMismatch { expected: dim, found: coord_powers.len() })
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, KernelSpec::Zero) || matches!(self, KernelSpec::PowerCube { coefficient, .. } if *coefficient == 0.0)
    }

    pub fn eval(&self, t: &Point, dim: usize) -> f64 {
        let r = math::norm(t, dim);
        match self {
            KernelSpec::Zero => 0.0,
            KernelSpec::PowerAnnulus { sigma, r_inner, r_outer } => {
                if r > *r_inner && r <= *r_outer {
                    math::powf(r, *sigma)
                } else {
                    0.0
                }
            }
            KernelSpec::PowerCube { coefficient, norm_power, coord_powers } => {
                if t[..dim].iter().any(|&c| !(c > 0.0 && c <= 1.0)) {
                    return 0.0;
                }
                let mut v = *coefficient;
                if *norm_power != 0.0 {
                    v *= math::powf(r, *norm_power);
                }
                for (i, &e) in coord_powers.iter().enumerate() {
                    if e == 1.0 {
                        v *= t[i];
                    } else if e != 0.0 {
                        v *= math::powf(t[i], e);
                    }
                }
                v
            }
            KernelSpec::GaussianTail { sigma } => math::powf(r, *sigma) * math::exp(-r * r),
        }
    }

    /// Radii `(lo, hi]` of the support along the ray through unit vector `u`.
    pub fn ray_support(&self, u: &Point, dim: usize) -> (f64, f64) {
        match self {
            KernelSpec::Zero => (0.0, 0.0),
            KernelSpec::PowerAnnulus { r_inner, r_outer, .. } => (*r_inner, *r_outer),
            KernelSpec::PowerCube { .. } => {
                if u[..dim].iter().all(|&c| c > 0.0) {
                    let m = u[..dim].iter().fold(0.0f64, |m, c| m.max(*c));
                    (0.0, 1.0 / m)
                } else {
                    (0.0, 0.0)
                }
            }
            KernelSpec::GaussianTail { .. } => (0.0, f64::INFINITY),
        }
    }

    /// True when the support reaches beyond every bounded radius.
    pub fn unbounded_support(&self) -> bool {
        matches!(self, KernelSpec::GaussianTail { .. })
    }
}

/// Quadrature node of the `t`-integral with the kernel weight folded in:
/// `weight = w Phi(t) / |t|^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TNode {
    pub t: Point,
    pub weight: f64,
    pub k: i32,
}

/// Nodes of `t_grid` inside the support of `kernel`, zero-weight nodes dropped.
pub fn kernel_nodes(kernel: &KernelSpec, t_grid: &QuadratureGrid) -> Result<Vec<TNode>> {
    kernel_nodes_split(kernel, t_grid, &[])
}

/// As [`kernel_nodes`], with every shell also split at the radii `breaks`.
pub fn kernel_nodes_split(kernel: &KernelSpec, t_grid: &QuadratureGrid, breaks: &[f64]) -> Result<Vec<TNode>> {
    let dim = t_grid.dim();
    kernel.check(dim)?;
    if kernel.is_zero() {
        return Ok(Vec::new());
    }
    let ray = |u: &Point| kernel.ray_support(u, dim);
    let nodes = t_grid.nodes_clipped(&ray, breaks);
    let mut out = Vec::with_capacity(nodes.len());
    for n in nodes {
        let phi = kernel.eval(&n.x, dim);
        if phi == 0.0 {
            continue;
        }
        let weight = n.w * phi / math::powf(n.r, dim as f64);
        if !weight.is_finite() {
            return Err(Error::NonFiniteValue { node: n.x, value: weight });
        }
        out.push(TNode { t: n.x, weight, k: n.k });
    }
    Ok(out)
}

/// Neighbour ratio above which a non-negligible edge shell is read as a
/// non-decaying tail.
pub const DIVERGENCE_RATIO: f64 = 0.99;

/// Sum of per-shell contributions with the tail diagnosis.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellSum {
    pub value: f64,
    pub divergent: bool,
    pub flags: Flags,
}

/// Adds shell contributions in order of `k`.
///
/// An edge shell carrying at least `EDGE_SHARE` of the absolute total is
/// divergent when it is at least `DIVERGENCE_RATIO` times its neighbour and
/// truncation-suspect otherwise.
pub fn reduce_shells(contributions: &[f64]) -> ShellSum {
    let value: f64 = contributions.iter().sum();
    let total: f64 = contributions.iter().map(|c| math::abs(*c)).sum();
    let mut flags = Flags::new();
    let mut divergent = false;
    let n = contributions.len();
    if total > 0.0 && n >= 2 {
        for (edge, next) in [(0, 1), (n - 1, n - 2)] {
            let e = math::abs(contributions[edge]);
            if e >= EDGE_SHARE * total {
                if e >= DIVERGENCE_RATIO * math::abs(contributions[next]) {
                    divergent = true;
                } else {
                    flags.insert(Flag::TruncationSuspect);
                }
            }
        }
    }
    if divergent {
        flags.insert(Flag::NormInfinite);
    }
    ShellSum { value, divergent, flags }
}

/// Per-shell sums of `g(node) * weight`, indexed by `k - k_min`.
pub fn shell_contributions(
    nodes: &[TNode],
    t_grid: &QuadratureGrid,
    mut g: impl FnMut(&TNode) -> Result<f64>,
) -> Result<Vec<f64>> {
    let k_min = t_grid.k_min();
    let mut out = alloc::vec![0.0; (t_grid.k_max() - k_min + 1) as usize];
    for n in nodes {
        let v = g(n)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteValue { node: n.t, value: v });
        }
        out[(n.k - k_min) as usize] += v * n.weight;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{make_grid, Rule};

    #[test]
    fn cube_kernel_nodes_integrate_exactly() {
        // int_{(0,1]^2} t_1 t_2 dt = 1/4, via Phi(t)/|t|^2 * |t|^2
        let k = KernelSpec::PowerCube { coefficient: 1.0, norm_power: 2.0, coord_powers: alloc::vec![1.0, 1.0] };
        let g = make_grid(2, -50, 1, 16, 256, Rule::GaussLegendre).unwrap();
        let nodes = kernel_nodes(&k, &g).unwrap();
        let s: f64 = nodes.iter().map(|n| n.weight * math::norm(&n.t, 2).powi(2) / math::norm(&n.t, 2).powi(2)).sum();
        let direct: f64 = nodes.iter().map(|n| n.weight).sum();
        assert!((s - direct).abs() < 1e-15);
        // with the |t|^2 factor cancelling, the weight sum is int t_1 t_2 dt
        assert!((direct - 0.25).abs() < 1e-12, "{direct}");
    }

    #[test]
    fn annulus_support_and_zero_kernel() {
        let g = make_grid(1, -10, 4, 8, 1, Rule::GaussLegendre).unwrap();
        let k = KernelSpec::PowerAnnulus { sigma: 1.0, r_inner: 0.5, r_outer: 3.0 };
        let s: f64 = kernel_nodes(&k, &g).unwrap().iter().map(|n| n.weight).sum();
        // Phi/|t| = 1 on two intervals of length 2.5
        assert!((s - 5.0).abs() < 1e-12);
        assert!(kernel_nodes(&KernelSpec::Zero, &g).unwrap().is_empty());
    }

    #[test]
    fn shell_tail_diagnosis() {
        let flat = reduce_shells(&[0.7, 0.7, 0.7, 0.0]);
        assert!(flat.divergent && flat.flags.contains(Flag::NormInfinite));
        let decaying: Vec<f64> = (0..61).map(|k: i32| 0.5f64.powi((k - 30).abs())).collect();
        let s = reduce_shells(&decaying);
        assert!(!s.divergent && s.flags.is_empty());
        let slow: Vec<f64> = (0..11).map(|k: i32| 0.5f64.powi((k - 5).abs())).collect();
        let s = reduce_shells(&slow);
        assert!(!s.divergent && s.flags.contains(Flag::TruncationSuspect));
        assert_eq!(reduce_shells(&[0.0, 0.0]).value, 0.0);
    }
}
