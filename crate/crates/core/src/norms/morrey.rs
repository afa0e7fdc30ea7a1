use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{check_dims, luxemburg_from_samples};
use crate::error::{Error, Result};
use crate::exponents::ExponentFunction;
use crate::flags::{Flag, Flags};
use crate::math;
use crate::quadrature::{ModularSamples, Node, PowerWeight, QuadratureGrid, RealFunction};

/// Supremum over a finite radius grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupReport {
    pub value: f64,
    /// Radius attaining the supremum.
    pub argmax: f64,
    /// `(R, value at R)` for every radius of the grid.
    pub series: Vec<(f64, f64)>,
    pub flags: Flags,
}

/// `R = 2^j`, `j` in `[-20, 20]`.
pub fn default_radii() -> Vec<f64> {
    (-20..=20).map(math::exp2i).collect()
}

/// Supremum of `series` with SUP_AT_BOUNDARY when an endpoint strictly beats
/// every interior radius.
pub(crate) fn sup_of(series: Vec<(f64, f64)>) -> SupReport {
    let mut flags = Flags::new();
    let n = series.len();
    let mut best = (f64::NAN, 0.0f64);
    let mut best_i = 0;
    for (i, &(r, v)) in series.iter().enumerate() {
        if i == 0 || v > best.1 {
            best = (r, v);
            best_i = i;
        }
    }
    if n > 2 && (best_i == 0 || best_i == n - 1) {
        let interior = series[1..n - 1].iter().fold(f64::NEG_INFINITY, |m, s| m.max(s.1));
        if best.1 > interior * (1.0 + 1e-9) && best.1 > 0.0 {
            flags.insert(Flag::SupAtBoundary);
        }
    }
    SupReport { value: best.1.max(0.0), argmax: best.0, series, flags }
}

pub(crate) fn validate_radii(radii: &[f64], grid: &QuadratureGrid) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::invalid("radii", "must be non-empty"));
    }
    let (lo, _) = grid.covered();
    for &r in radii {
        if !(r > lo && r.is_finite()) {
            return Err(Error::invalid("radii", "every radius must be finite and inside the covered annulus"));
        }
    }
    Ok(())
}

/// Nodes of the ball `B(0, max radius)` split at every radius of `radii`, so
/// that each ball of the family is an exact union of nodes.
pub(crate) fn ball_family_nodes(f: &dyn RealFunction, grid: &QuadratureGrid, radii: &[f64]) -> Vec<Node> {
    let r_max = radii.iter().fold(0.0f64, |m, r| m.max(*r));
    let mut breaks = f.radial_breaks();
    breaks.extend_from_slice(radii);
    grid.nodes_in_ball(r_max.min(f.support_radius()).max(0.0), &breaks)
}

/// Two-weight central Morrey norm
/// `sup_R w1(B_R)^{-(lambda + 1/p_inf)} ||f chi_{B_R}||_{L^{p(.)}_{w2}}`.
pub fn central_morrey_norm(
    f: &dyn RealFunction,
    p: &ExponentFunction,
    lambda: f64,
    omega1: &PowerWeight,
    omega2: &PowerWeight,
    grid: &QuadratureGrid,
    radii: &[f64],
) -> Result<SupReport> {
    p.require_exponent()?;
    check_dims(f, grid)?;
    validate_radii(radii, grid)?;
    let p_inf = p.p_infty().ok_or_else(|| Error::invalid("p", "central Morrey norm needs p in P_inf"))?;
    let dim = grid.dim();
    let nodes = ball_family_nodes(f, grid, radii);
    let mut sampled: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(nodes.len());
    for n in &nodes {
        let v = f.eval(&n.x)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteValue { node: n.x, value: v });
        }
        sampled.push((n.r, math::abs(v) * omega2.eval(&n.x, dim), p.eval(&n.x), n.w));
    }
    let mut series = Vec::with_capacity(radii.len());
    for &r in radii {
        let mass = omega1.ball_mass(dim, r)?;
        let samples = ModularSamples::from_triples(sampled.iter().filter(|s| s.0 <= r).map(|s| (s.1, s.2, s.3)));
        let norm = luxemburg_from_samples(&samples)?;
        series.push((r, norm / math::powf(mass, lambda + 1.0 / p_inf)));
    }
    Ok(sup_of(series))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{make_grid, Rule, Shape, TestFunction};

    fn grid() -> QuadratureGrid {
        make_grid(1, -40, 22, 8, 1, Rule::GaussLegendre).unwrap()
    }

    #[test]
    fn examples() {
        let one = TestFunction::new(1, Shape::Constant { value: 1.0 }).unwrap();
        let p2 = ExponentFunction::constant(1, 2.0);
        let w = PowerWeight::UNIT;
        let r = central_morrey_norm(&one, &p2, 0.0, &w, &w, &grid(), &default_radii()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
        assert!(!r.flags.contains(Flag::SupAtBoundary));
        let zero = TestFunction::new(1, Shape::Zero).unwrap();
        assert_eq!(central_morrey_norm(&zero, &p2, 0.0, &w, &w, &grid(), &default_radii()).unwrap().value, 0.0);
        let r = central_morrey_norm(&one, &p2, -0.25, &w, &w, &grid(), &default_radii()).unwrap();
        assert_eq!(r.argmax, 2f64.powi(20));
        assert!((r.value - 2f64.powi(21).powf(0.25)).abs() < 1e-9 * r.value);
        assert!(r.flags.contains(Flag::SupAtBoundary));
    }

    #[test]
    fn divergent_ball_weight_rejected() {
        let one = TestFunction::new(1, Shape::Constant { value: 1.0 }).unwrap();
        let p2 = ExponentFunction::constant(1, 2.0);
        let bad = PowerWeight::Constant(-1.0);
        assert!(central_morrey_norm(&one, &p2, 0.0, &bad, &PowerWeight::UNIT, &grid(), &[1.0]).is_err());
    }
}
