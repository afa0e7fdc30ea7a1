//! Polar-dyadic quadrature on R^n, n <= 3.
//!
//! A grid is a product of unit directions and radial rules on the dyadic
//! shells `C_k = {2^{k-1} < |x| <= 2^k}`. Nodes are generated per shell, so
//! a shell can be clipped to a star-shaped support or split at the radii
//! where a function has a jump; both keep Gauss-Legendre at full order.

mod function;
mod gauss;
mod weight;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use function::{Combination, DeclaredLip, FunctionSpec, Product, RealFunction, Shape, TestFunction};
pub use gauss::{gauss_legendre_unit, midpoint_unit};
pub use weight::PowerWeight;

use crate::error::{Error, Result};
use crate::exponents::ExponentFunction;
use crate::flags::{Flag, Flags};
use crate::math;
use crate::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Midpoint,
    GaussLegendre,
}

fn default_radial() -> usize {
    64
}

fn default_angular() -> usize {
    64
}

fn default_rule() -> Rule {
    Rule::GaussLegendre
}

/// Serializable grid parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub k_min: i32,
    pub k_max: i32,
    #[serde(default = "default_radial")]
    pub radial_nodes: usize,
    #[serde(default = "default_angular")]
    pub angular_nodes: usize,
    #[serde(default = "default_rule")]
    pub rule: Rule,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { k_min: -32, k_max: 32, radial_nodes: 64, angular_nodes: 64, rule: Rule::GaussLegendre }
    }
}

/// A quadrature node: position, radius, weight (including `r^{n-1}` and the
/// angular weight) and the shell index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub x: Point,
    pub r: f64,
    pub w: f64,
    pub k: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    dim: usize,
    spec: GridSpec,
    radial: Vec<(f64, f64)>,
    directions: Vec<(Point, f64)>,
}

/// Builds a grid; see [`GridSpec`] for the parameters.
pub fn make_grid(
    dim: usize,
    k_min: i32,
    k_max: i32,
    radial_nodes_per_shell: usize,
    angular_nodes: usize,
    rule: Rule,
) -> Result<QuadratureGrid> {
    QuadratureGrid::new(
        dim,
        GridSpec { k_min, k_max, radial_nodes: radial_nodes_per_shell, angular_nodes, rule },
    )
}

impl QuadratureGrid {
    pub fn new(dim: usize, spec: GridSpec) -> Result<Self> {
        if !(1..=crate::MAX_DIM).contains(&dim) {
            return Err(Error::invalid("dim", "dimension must be 1, 2 or 3"));
        }
        if spec.k_min >= spec.k_max {
            return Err(Error::invalid("k_min", format!("need k_min < k_max, got {} >= {}", spec.k_min, spec.k_max)));
        }
        if spec.k_min < -1000 || spec.k_max > 1000 {
            return Err(Error::invalid("k_max", "shell indices must lie in [-1000, 1000]"));
        }
        if spec.radial_nodes < 2 {
            return Err(Error::invalid("radial_nodes", "need at least 2 radial nodes per shell"));
        }
        if spec.angular_nodes < 1 {
            return Err(Error::invalid("angular_nodes", "need at least 1 angular node"));
        }
        let radial = match spec.rule {
            Rule::Midpoint => midpoint_unit(spec.radial_nodes),
            Rule::GaussLegendre => gauss_legendre_unit(spec.radial_nodes),
        };
        let directions = directions(dim, spec.angular_nodes, spec.rule);
        Ok(Self { dim, spec, radial, directions })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn k_min(&self) -> i32 {
        self.spec.k_min
    }

    pub fn k_max(&self) -> i32 {
        self.spec.k_max
    }

    /// `(2^{k_min - 1}, 2^{k_max}]`
    pub fn covered(&self) -> (f64, f64) {
        (math::exp2i(self.spec.k_min - 1), math::exp2i(self.spec.k_max))
    }

    pub fn directions(&self) -> &[(Point, f64)] {
        &self.directions
    }

    /// Stable textual identity of the grid, carried in reports.
    pub fn fingerprint(&self) -> String {
        let rule = match self.spec.rule {
            Rule::Midpoint => "midpoint",
            Rule::GaussLegendre => "gauss_legendre",
        };
        format!(
            "n{}:k[{},{}]:r{}:a{}:{}",
            self.dim, self.spec.k_min, self.spec.k_max, self.spec.radial_nodes, self.directions.len(), rule
        )
    }

    pub fn node_count(&self) -> usize {
        (self.spec.k_max - self.spec.k_min + 1) as usize * self.radial.len() * self.directions.len()
    }

    /// Appends the nodes of shell `k`. Along direction `u` only radii in
    /// `ray(u) = (lo, hi]` are kept, and each piece is split at `breaks`.
    pub fn push_shell_nodes(
        &self,
        k: i32,
        ray: &dyn Fn(&Point) -> (f64, f64),
        breaks: &[f64],
        out: &mut Vec<Node>,
    ) {
        let a0 = math::exp2i(k - 1);
        let b0 = math::exp2i(k);
        let mut cuts: Vec<f64> = Vec::new();
        for (u, wu) in &self.directions {
            let (lo, hi) = ray(u);
            let a = a0.max(lo);
            let b = b0.min(hi);
            if !(a < b) {
                continue;
            }
            cuts.clear();
            cuts.push(a);
            cuts.extend(breaks.iter().copied().filter(|&c| c > a && c < b));
            cuts.push(b);
            cuts.sort_by(f64::total_cmp);
            for piece in cuts.windows(2) {
                let (pa, pb) = (piece[0], piece[1]);
                let h = pb - pa;
                if !(h > 0.0) {
                    continue;
                }
                for &(t, v) in &self.radial {
                    let r = pa + h * t;
                    let jac = match self.dim {
                        1 => 1.0,
                        2 => r,
                        _ => r * r,
                    };
                    out.push(Node { x: [u[0] * r, u[1] * r, u[2] * r], r, w: wu * v * h * jac, k });
                }
            }
        }
    }

    /// All nodes of shell `k`.
    pub fn shell_nodes(&self, k: i32) -> Vec<Node> {
        let mut out = Vec::with_capacity(self.radial.len() * self.directions.len());
        self.push_shell_nodes(k, &full_ray, &[], &mut out);
        out
    }

    /// All nodes, shell by shell in increasing `k`.
    pub fn nodes(&self) -> Vec<Node> {
        self.nodes_clipped(&full_ray, &[])
    }

    pub fn nodes_clipped(&self, ray: &dyn Fn(&Point) -> (f64, f64), breaks: &[f64]) -> Vec<Node> {
        let mut out = Vec::new();
        for k in self.spec.k_min..=self.spec.k_max {
            self.push_shell_nodes(k, ray, breaks, &mut out);
        }
        out
    }

    /// Nodes adapted to `f`: clipped to its support and split at its breaks.
    pub fn nodes_for(&self, f: &dyn RealFunction) -> Vec<Node> {
        self.nodes_in_ball(f.support_radius(), &f.radial_breaks())
    }

    /// Nodes with `|x| <= radius`, split at `breaks`.
    pub fn nodes_in_ball(&self, radius: f64, breaks: &[f64]) -> Vec<Node> {
        let mut out = Vec::new();
        if !(radius > 0.0) {
            return out;
        }
        let ray = move |_: &Point| (0.0, radius);
        for k in self.spec.k_min..=self.spec.k_max {
            if math::exp2i(k - 1) >= radius {
                break;
            }
            self.push_shell_nodes(k, &ray, breaks, &mut out);
        }
        out
    }
}

fn full_ray(_: &Point) -> (f64, f64) {
    (0.0, f64::INFINITY)
}

/// Unit directions with angular weights summing to `|S^{n-1}|`.
fn directions(dim: usize, angular: usize, rule: Rule) -> Vec<(Point, f64)> {
    use core::f64::consts::PI;
    match dim {
        1 => alloc::vec![([-1.0, 0.0, 0.0], 1.0), ([1.0, 0.0, 0.0], 1.0)],
        2 => {
            let angles: Vec<(f64, f64)> = match rule {
                Rule::Midpoint => {
                    let h = 2.0 * PI / angular as f64;
                    (0..angular).map(|j| ((j as f64 + 0.5) * h, h)).collect()
                }
                Rule::GaussLegendre => {
                    // eight panels aligned with the axes and diagonals, where
                    // cube-shaped supports have their corners
                    let per = angular.div_ceil(8).max(1);
                    let gl = gauss_legendre_unit(per);
                    let h = PI / 4.0;
                    let mut out = Vec::with_capacity(8 * per);
                    for p in 0..8 {
                        for &(t, v) in &gl {
                            out.push(((p as f64 + t) * h, v * h));
                        }
                    }
                    out
                }
            };
            angles.into_iter().map(|(th, w)| ([math::cos(th), math::sin(th), 0.0], w)).collect()
        }
        _ => {
            let polar = math::sqrt(angular as f64 / 2.0) as usize;
            let polar = polar.max(1);
            let az = 2 * polar;
            let gl = gauss_legendre_unit(polar);
            let h = 2.0 * PI / az as f64;
            let mut out = Vec::with_capacity(polar * az);
            for &(t, v) in &gl {
                let z = 2.0 * t - 1.0;
                let rho = math::sqrt((1.0 - z * z).max(0.0));
                for j in 0..az {
                    let ph = (j as f64 + 0.5) * h;
                    out.push(([rho * math::cos(ph), rho * math::sin(ph), z], 2.0 * v * h));
                }
            }
            out
        }
    }
}

/// Value of an integral plus the flags raised while computing it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralReport {
    pub value: f64,
    pub flags: Flags,
}

fn eval_checked(f: &dyn RealFunction, node: &Node) -> Result<f64> {
    let v = f.eval(&node.x)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteValue { node: node.x, value: v })
    }
}

/// `int f` over the covered annulus.
pub fn integrate(f: &dyn RealFunction, grid: &QuadratureGrid) -> Result<f64> {
    Ok(integrate_with_report(f, grid)?.value)
}

/// `int f` plus TRUNCATION_SUSPECT when the innermost or outermost shell
/// carries at least `1e-8` of the total.
pub fn integrate_with_report(f: &dyn RealFunction, grid: &QuadratureGrid) -> Result<IntegralReport> {
    if f.dim() != grid.dim {
        return Err(Error::DimensionMismatch { expected: grid.dim, found: f.dim() });
    }
    let breaks = f.radial_breaks();
    let support = f.support_radius();
    let ray = move |_: &Point| (0.0, support);
    let mut buf = Vec::new();
    let mut contributions = Vec::new();
    for k in grid.k_min()..=grid.k_max() {
        buf.clear();
        grid.push_shell_nodes(k, &ray, &breaks, &mut buf);
        let mut s = 0.0;
        for node in &buf {
            s += eval_checked(f, node)? * node.w;
        }
        contributions.push(s);
    }
    let value: f64 = contributions.iter().sum();
    let mut flags = Flags::new();
    if edge_shells_suspect(&contributions) {
        flags.insert(Flag::TruncationSuspect);
    }
    Ok(IntegralReport { value, flags })
}

/// Relative share above which an edge shell makes a truncated sum suspect.
pub const EDGE_SHARE: f64 = 1e-8;

/// True when the first or last entry is a non-negligible share of the total.
pub fn edge_shells_suspect(contributions: &[f64]) -> bool {
    let total: f64 = contributions.iter().map(|c| math::abs(*c)).sum();
    if total == 0.0 || contributions.is_empty() {
        return false;
    }
    let first = math::abs(contributions[0]);
    let last = math::abs(contributions[contributions.len() - 1]);
    first >= EDGE_SHARE * total || last >= EDGE_SHARE * total
}

/// Pre-sampled integrand of a modular: `a = |f| w` and the exponent at every
/// node. Evaluating the modular for a new `eta` costs one pass and no calls
/// into `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularSamples {
    finite: Vec<(f64, f64, f64)>,
    sup_part: f64,
    constant_p: Option<f64>,
}

impl ModularSamples {
    /// Samples `|f(x)| w(x) factor(x)` and `p(x)` over `nodes`.
    pub fn build(
        f: &dyn RealFunction,
        p: &ExponentFunction,
        omega: &PowerWeight,
        nodes: &[Node],
        factor: Option<&dyn Fn(&Node) -> f64>,
    ) -> Result<Self> {
        p.require_exponent()?;
        let dim = p.dim();
        let mut out = Self { finite: Vec::with_capacity(nodes.len()), sup_part: 0.0, constant_p: p.constant_value() };
        for node in nodes {
            let v = eval_checked(f, node)?;
            if v == 0.0 {
                continue;
            }
            let mut a = math::abs(v) * omega.eval(&node.x, dim);
            if let Some(g) = factor {
                a *= g(node);
            }
            if !a.is_finite() {
                return Err(Error::NonFiniteValue { node: node.x, value: a });
            }
            out.push(a, p.eval(&node.x), node.w);
        }
        Ok(out)
    }

    /// From raw `(a, p, w)` triples.
    pub fn from_triples(triples: impl IntoIterator<Item = (f64, f64, f64)>) -> Self {
        let mut out = Self { finite: Vec::new(), sup_part: 0.0, constant_p: None };
        let mut first: Option<f64> = None;
        let mut constant = true;
        for (a, p, w) in triples {
            match first {
                None => first = Some(p),
                Some(q) if q != p => constant = false,
                _ => {}
            }
            out.push(a, p, w);
        }
        out.constant_p = if constant { first } else { None };
        out
    }

    fn push(&mut self, a: f64, p: f64, w: f64) {
        if a == 0.0 {
            return;
        }
        if p == f64::INFINITY {
            self.sup_part = self.sup_part.max(a);
        } else {
            self.finite.push((a, p, w));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.finite.is_empty() && self.sup_part == 0.0
    }

    pub fn constant_p(&self) -> Option<f64> {
        self.constant_p
    }

    /// `sum w (a/eta)^p + max_{p = inf} a / eta`
    pub fn modular(&self, eta: f64) -> f64 {
        let mut s = 0.0;
        for &(a, p, w) in &self.finite {
            s += w * math::powf(a / eta, p);
        }
        s + self.sup_part / eta
    }

    /// `(max a over p < inf nodes, max a over p = inf nodes)`
    pub(crate) fn maxima(&self) -> (f64, f64) {
        let m = self.finite.iter().fold(0.0f64, |m, t| m.max(t.0));
        (m, self.sup_part)
    }

    pub(crate) fn finite_terms(&self) -> &[(f64, f64, f64)] {
        &self.finite
    }
}

/// `F_p(f w / eta)` over the grid.
pub fn modular(
    f: &dyn RealFunction,
    p: &ExponentFunction,
    omega: &PowerWeight,
    eta: f64,
    grid: &QuadratureGrid,
) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(Error::invalid("eta", "must be positive"));
    }
    let nodes = grid.nodes_for(f);
    let samples = ModularSamples::build(f, p, omega, &nodes, None)?;
    Ok(samples.modular(eta))
}
