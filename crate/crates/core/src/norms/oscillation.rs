use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::morrey::{sup_of, validate_radii, SupReport};
use crate::error::{Error, Result};
use crate::exponents::{sample_directions, sample_points};
use crate::flags::{Flag, Flags};
use crate::math;
use crate::quadrature::{gauss_legendre_unit, PowerWeight, QuadratureGrid, RealFunction, TestFunction};
use crate::Point;

/// Central mean oscillation
/// `sup_R (w(B_R)^{-1} int_{B_R} |b - b_{w,B_R}|^q w)^{1/q}`.
///
/// The additive offset of `b` is removed first, so `b + c` and `b` give
/// bit-identical results.
pub fn cmo_norm(
    b: &TestFunction,
    q: f64,
    omega: &PowerWeight,
    grid: &QuadratureGrid,
    radii: &[f64],
) -> Result<SupReport> {
    if !(q >= 1.0) {
        return Err(Error::invalid("q", "CMO exponent must be at least 1"));
    }
    super::check_dims(b, grid)?;
    validate_radii(radii, grid)?;
    if b.is_constant() {
        return Ok(sup_of(radii.iter().map(|&r| (r, 0.0)).collect()));
    }
    let b = b.without_offset();
    let dim = grid.dim();
    let r_max = radii.iter().fold(0.0f64, |m, r| m.max(*r));
    let mut breaks = b.radial_breaks();
    breaks.extend_from_slice(radii);
    let nodes = grid.nodes_in_ball(r_max, &breaks);
    let mut sampled = Vec::with_capacity(nodes.len());
    for n in &nodes {
        let v = b.value(&n.x);
        if !v.is_finite() {
            return Err(Error::NonFiniteValue { node: n.x, value: v });
        }
        sampled.push((n.r, v, n.w * omega.eval(&n.x, dim)));
    }
    let mut series = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut mass = 0.0;
        let mut first = 0.0;
        for s in sampled.iter().filter(|s| s.0 <= r) {
            mass += s.2;
            first += s.2 * s.1;
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::invalid("omega", "ball mass must be positive and finite"));
        }
        let avg = first / mass;
        let mut osc = 0.0;
        for s in sampled.iter().filter(|s| s.0 <= r) {
            osc += s.2 * math::powf(math::abs(s.1 - avg), q);
        }
        series.push((r, math::powf(osc / mass, 1.0 / q)));
    }
    Ok(sup_of(series))
}

/// Deterministic pair family for the Lipschitz quotient: base points
/// `rho u` and partners `rho u + rho s v` for sampled directions `u, v`,
/// plus pairs `(0, rho s u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSampling {
    pub radii: Vec<f64>,
    pub relative_separations: Vec<f64>,
}

impl Default for PairSampling {
    fn default() -> Self {
        Self {
            radii: (-10..=10).map(math::exp2i).collect(),
            relative_separations: (-20..=0).map(math::exp2i).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub empirical_lower_bound: f64,
    pub declared: Option<f64>,
    pub reconciled: f64,
    pub flags: Flags,
}

const LIP_TOL: f64 = 1e-9;

/// Sampled lower bound of `sup |b(x) - b(y)| / |x - y|^beta`, reconciled with
/// the declared constant when one exists for this `beta`.
pub fn lipschitz_seminorm(b: &TestFunction, beta: f64, sampling: &PairSampling) -> Result<LipschitzReport> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::invalid("beta", "must lie in (0, 1]"));
    }
    if sampling.radii.is_empty() || sampling.relative_separations.is_empty() {
        return Err(Error::invalid("pair_samples", "must be non-empty"));
    }
    let dim = b.dim();
    let dirs = sample_directions(dim);
    let mut best: f64 = 0.0;
    let mut quotient = |x: &Point, y: &Point| {
        let d = [y[0] - x[0], y[1] - x[1], y[2] - x[2]];
        let h = math::norm(&d, dim);
        if h > 0.0 {
            let v = math::abs(b.difference(x, y)) / math::powf(h, beta);
            if v.is_finite() {
                best = best.max(v);
            }
        }
    };
    for x in sample_points(dim, &sampling.radii) {
        let rho = math::norm(&x, dim);
        for &s in &sampling.relative_separations {
            for v in &dirs {
                let y = [x[0] + rho * s * v[0], x[1] + rho * s * v[1], x[2] + rho * s * v[2]];
                quotient(&x, &y);
            }
            let y = [s * x[0], s * x[1], s * x[2]];
            quotient(&[0.0; 3], &y);
        }
    }
    let declared = b
        .declared_lip()
        .filter(|d| math::abs(d.beta - beta) <= 1e-12)
        .map(|d| d.constant);
    let mut flags = Flags::new();
    let reconciled = match declared {
        Some(c) if c >= best * (1.0 - LIP_TOL) => c,
        Some(c) => return Err(Error::DeclaredInconsistent { declared: c, empirical: best }),
        None => {
            flags.insert(Flag::Undeclared);
            best
        }
    };
    Ok(LipschitzReport { empirical_lower_bound: best, declared, reconciled, flags })
}

/// Axis-parallel cube `center + (-half_side, half_side)^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cube {
    pub center: Point,
    pub half_side: f64,
}

/// Cubes centred at the origin and at the sampling points, with half sides
/// `2^j`, `j` in `[-4, 4]`.
pub fn default_cubes(dim: usize) -> Vec<Cube> {
    let sides: Vec<f64> = (-4..=4).map(math::exp2i).collect();
    let mut centers = alloc::vec![[0.0; 3]];
    centers.extend(sample_points(dim, &sides));
    let mut out = Vec::new();
    for c in centers {
        for &h in &sides {
            out.push(Cube { center: c, half_side: h });
        }
    }
    out
}

/// Composite Gauss-Legendre rule on `(c - h, c + h)`, split at the centre
/// and at the origin when it falls inside.
fn axis_rule(c: f64, h: f64, per_panel: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut cuts = alloc::vec![c - h, c, c + h];
    if c - h < 0.0 && 0.0 < c + h && c != 0.0 {
        cuts.push(0.0);
    }
    cuts.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let len = w[1] - w[0];
        for &(t, v) in per_panel {
            out.push((w[0] + len * t, v * len));
        }
    }
    out
}

/// Largest mean oscillation `|Q|^{-1} int_Q |b - b_Q|` over `cubes`: a lower
/// bound on the BMO norm.
pub fn bmo_norm(b: &TestFunction, cubes: &[Cube]) -> Result<f64> {
    if cubes.is_empty() {
        return Err(Error::invalid("cube_samples", "must be non-empty"));
    }
    if b.is_constant() {
        return Ok(0.0);
    }
    let b = b.without_offset();
    let dim = b.dim();
    let per_panel = gauss_legendre_unit(if dim == 3 { 8 } else { 24 });
    let mut best: f64 = 0.0;
    let mut values = Vec::new();
    for cube in cubes {
        if !(cube.half_side > 0.0) {
            return Err(Error::invalid("half_side", "must be positive"));
        }
        let axes: Vec<Vec<(f64, f64)>> =
            (0..dim).map(|i| axis_rule(cube.center[i], cube.half_side, &per_panel)).collect();
        values.clear();
        let mut vol = 0.0;
        let mut sum = 0.0;
        let n0 = axes[0].len();
        let n1 = if dim > 1 { axes[1].len() } else { 1 };
        let n2 = if dim > 2 { axes[2].len() } else { 1 };
        for i in 0..n0 {
            for j in 0..n1 {
                for k in 0..n2 {
                    let mut x = [0.0; 3];
                    let mut w = axes[0][i].1;
                    x[0] = axes[0][i].0;
                    if dim > 1 {
                        x[1] = axes[1][j].0;
                        w *= axes[1][j].1;
                    }
                    if dim > 2 {
                        x[2] = axes[2][k].0;
                        w *= axes[2][k].1;
                    }
                    let v = b.value(&x);
                    if !v.is_finite() {
                        return Err(Error::NonFiniteValue { node: x, value: v });
                    }
                    vol += w;
                    sum += w * v;
                    values.push((v, w));
                }
            }
        }
        let mean = sum / vol;
        let osc: f64 = values.iter().map(|(v, w)| w * math::abs(v - mean)).sum::<f64>() / vol;
        best = best.max(osc);
    }
    Ok(best)
}
