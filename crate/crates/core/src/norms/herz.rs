use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{check_dims, luxemburg_from_samples};
use crate::error::{Error, Result};
use crate::exponents::ExponentFunction;
use crate::flags::{Flag, Flags};
use crate::math;
use crate::quadrature::{ModularSamples, Node, PowerWeight, QuadratureGrid, RealFunction, EDGE_SHARE};

/// `||2^{k alpha(.)} f chi_k||_{L^{q(.)}_w}` for every shell of the grid,
/// in increasing `k`.
pub fn shell_norms(
    f: &dyn RealFunction,
    alpha: &ExponentFunction,
    q: &ExponentFunction,
    omega: &PowerWeight,
    grid: &QuadratureGrid,
) -> Result<Vec<(i32, f64)>> {
    q.require_exponent()?;
    check_dims(f, grid)?;
    let nodes = grid.nodes_for(f);
    let alpha_const = alpha.constant_value();
    let mut out = Vec::with_capacity((grid.k_max() - grid.k_min() + 1) as usize);
    let mut start = 0;
    for k in grid.k_min()..=grid.k_max() {
        let end = start + nodes[start..].iter().take_while(|n| n.k == k).count();
        let shell = &nodes[start..end];
        start = end;
        let value = if shell.is_empty() {
            0.0
        } else {
            let factor = |n: &Node| match alpha_const {
                Some(0.0) => 1.0,
                Some(a) => math::powf(2.0, k as f64 * a),
                None => math::powf(2.0, k as f64 * alpha.eval(&n.x)),
            };
            let samples = ModularSamples::build(f, q, omega, shell, Some(&factor))?;
            luxemburg_from_samples(&samples)?
        };
        out.push((k, value));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HerzReport {
    pub value: f64,
    /// `k_0` attaining the supremum; absent for the Herz case `lambda = 0`.
    pub argmax_k0: Option<i32>,
    pub shell_norms: Vec<(i32, f64)>,
    pub flags: Flags,
}

/// Morrey-Herz norm `sup_{k0} 2^{-k0 lambda} (sum_{k <= k0} ||2^{k alpha} f chi_k||^p)^{1/p}`.
///
/// With `lambda = 0` the partial sums increase with `k0`, so the full sum
/// over the grid (the Herz norm) is returned. For `lambda > 0` the supremum
/// runs over `k0_range`, which must lie inside the grid's shell range.
#[allow(clippy::too_many_arguments)]
pub fn herz_morrey_norm(
    f: &dyn RealFunction,
    alpha: &ExponentFunction,
    lambda: f64,
    p: f64,
    q: &ExponentFunction,
    omega: &PowerWeight,
    grid: &QuadratureGrid,
    k0_range: (i32, i32),
) -> Result<HerzReport> {
    if !(p > 0.0) {
        return Err(Error::invalid("p", "outer exponent must be positive"));
    }
    if !(lambda >= 0.0) {
        return Err(Error::invalid("lambda", "must be non-negative"));
    }
    let shells = shell_norms(f, alpha, q, omega, grid)?;
    aggregate(shells, lambda, p, grid, k0_range)
}

pub(crate) fn aggregate(
    shells: Vec<(i32, f64)>,
    lambda: f64,
    p: f64,
    grid: &QuadratureGrid,
    k0_range: (i32, i32),
) -> Result<HerzReport> {
    let mut flags = Flags::new();
    let powers: Vec<f64> = shells.iter().map(|s| math::powf(s.1, p)).collect();
    let total: f64 = powers.iter().sum();
    if total > 0.0 {
        let first = powers[0];
        let last = powers[powers.len() - 1];
        if first >= EDGE_SHARE * total || (lambda == 0.0 && last >= EDGE_SHARE * total) {
            flags.insert(Flag::TruncationSuspect);
        }
    }
    if lambda == 0.0 {
        return Ok(HerzReport { value: math::powf(total, 1.0 / p), argmax_k0: None, shell_norms: shells, flags });
    }
    let (lo, hi) = k0_range;
    if lo > hi || lo < grid.k_min() || hi > grid.k_max() {
        return Err(Error::invalid("k0_range", "must be non-empty and inside the grid's shell range"));
    }
    let mut partial = 0.0;
    let mut best = f64::NEG_INFINITY;
    let mut best_k0 = lo;
    let mut interior_best = f64::NEG_INFINITY;
    for (i, (k, _)) in shells.iter().enumerate() {
        partial += powers[i];
        if *k < lo {
            continue;
        }
        if *k > hi {
            break;
        }
        let v = math::powf(2.0, -(*k as f64) * lambda) * math::powf(partial, 1.0 / p);
        if v > best {
            best = v;
            best_k0 = *k;
        }
        if *k != lo && *k != hi && v > interior_best {
            interior_best = v;
        }
    }
    if (best_k0 == lo || best_k0 == hi) && best > interior_best * (1.0 + 1e-9) && best > 0.0 {
        flags.insert(Flag::SupAtBoundary);
    }
    Ok(HerzReport { value: best.max(0.0), argmax_k0: Some(best_k0), shell_norms: shells, flags })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaVeReport {
    pub lhs: f64,
    pub rhs_without_constant: f64,
    pub ratio: f64,
    pub morrey_herz_norm: f64,
}

/// Shell estimate `||f chi_j|| <= C 2^{j(lambda - alpha(0))} ||f||_MK` for
/// `j < 0` and `2^{j(lambda - alpha_inf)}` for `j >= 0`.
#[allow(clippy::too_many_arguments)]
pub fn lemma_ve_check(
    f: &dyn RealFunction,
    alpha: &ExponentFunction,
    lambda: f64,
    p: f64,
    q: &ExponentFunction,
    omega: &PowerWeight,
    j: i32,
    grid: &QuadratureGrid,
    k0_range: (i32, i32),
) -> Result<LemmaVeReport> {
    if j < grid.k_min() || j > grid.k_max() {
        return Err(Error::invalid("j", "shell index outside the grid"));
    }
    let mk = herz_morrey_norm(f, alpha, lambda, p, q, omega, grid, k0_range)?;
    if mk.value == 0.0 {
        return Err(Error::ZeroInput);
    }
    let zero = ExponentFunction::real_constant(alpha.dim(), 0.0);
    let lhs = shell_norms(f, &zero, q, omega, grid)?
        .into_iter()
        .find(|s| s.0 == j)
        .map_or(0.0, |s| s.1);
    let a = if j < 0 {
        alpha.p_zero()
    } else {
        alpha
            .p_infty()
            .ok_or_else(|| Error::invalid("alpha", "needs a limit at infinity"))?
    };
    let rhs = math::powf(2.0, j as f64 * (lambda - a)) * mk.value;
    Ok(LemmaVeReport { lhs, rhs_without_constant: rhs, ratio: lhs / rhs, morrey_herz_norm: mk.value })
}
