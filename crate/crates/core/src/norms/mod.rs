//! Norms of the variable-exponent function spaces.
//!
//! Every norm is built from [`ModularSamples`]: the integrand of the modular
//! is sampled once and the Luxemburg equation `F(f / eta) = 1` is solved on
//! the samples. For constant exponents the root has a closed form and is used
//! directly; otherwise a bracket expanding by powers of 4 from `eta = 1` is
//! bisected until it stops shrinking.

mod herz;
mod morrey;
mod oscillation;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use herz::{herz_morrey_norm, lemma_ve_check, shell_norms, HerzReport, LemmaVeReport};
pub use morrey::{central_morrey_norm, default_radii, SupReport};
pub use oscillation::{
    bmo_norm, cmo_norm, default_cubes, lipschitz_seminorm, Cube, LipschitzReport, PairSampling,
};

use crate::error::{Error, Result};
use crate::exponents::{ExponentFunction, FunctionKind};
use crate::flags::{Flag, Flags};
use crate::math;
use crate::quadrature::{ModularSamples, Node, PowerWeight, QuadratureGrid, RealFunction, EDGE_SHARE};
use crate::Point;

/// Bracket limit `2^{+-200}` of the Luxemburg search.
const BRACKET_LIMIT: i32 = 200;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub value: f64,
    pub flags: Flags,
}

/// Solves `F(eta) = 1` for the sampled modular.
pub fn luxemburg_from_samples(samples: &ModularSamples) -> Result<f64> {
    if samples.is_zero() {
        return Ok(0.0);
    }
    let (max_finite, sup_part) = samples.maxima();
    if let Some(p) = samples.constant_p() {
        if p == f64::INFINITY {
            return Ok(sup_part);
        }
        // F(eta) = S / eta^p, scaled by the largest sample to avoid overflow
        let m = max_finite;
        let mut s = 0.0;
        for &(a, p, w) in samples.finite_terms() {
            s += w * math::powf(a / m, p);
        }
        let eta = m * math::powf(s, 1.0 / p);
        return if eta.is_finite() { Ok(eta) } else { Err(Error::infinite("Luxemburg norm")) };
    }
    let f = |eta: f64| samples.modular(eta);
    let (mut lo, mut hi);
    if f(1.0) > 1.0 {
        lo = 1.0;
        hi = 4.0;
        let mut e = 2;
        while f(hi) > 1.0 {
            lo = hi;
            e += 2;
            if e > BRACKET_LIMIT {
                return Err(Error::infinite("Luxemburg bracket exceeded 2^200"));
            }
            hi = math::exp2i(e);
        }
    } else {
        hi = 1.0;
        lo = 0.25;
        let mut e = -2;
        while f(lo) <= 1.0 {
            hi = lo;
            e -= 2;
            if e < -BRACKET_LIMIT {
                return Ok(hi);
            }
            lo = math::exp2i(e);
        }
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `||f||_{L^{p(.)}_w}` over the covered annulus.
///
/// TRUNCATION_SUSPECT is raised when the innermost or outermost shell
/// carries a share of at least `1e-8` of the modular at the computed norm.
pub fn luxemburg_norm(
    f: &dyn RealFunction,
    p: &ExponentFunction,
    omega: &PowerWeight,
    grid: &QuadratureGrid,
) -> Result<NormValue> {
    p.require_exponent()?;
    check_dims(f, grid)?;
    let nodes = grid.nodes_for(f);
    let samples = ModularSamples::build(f, p, omega, &nodes, None)?;
    let value = luxemburg_from_samples(&samples)?;
    let mut flags = Flags::new();
    if value > 0.0 && edge_share(&nodes, grid, &samples, value, |n| {
        ModularSamples::build(f, p, omega, n, None)
    })? {
        flags.insert(Flag::TruncationSuspect);
    }
    Ok(NormValue { value, flags })
}

fn edge_share(
    nodes: &[Node],
    grid: &QuadratureGrid,
    all: &ModularSamples,
    eta: f64,
    build: impl Fn(&[Node]) -> Result<ModularSamples>,
) -> Result<bool> {
    let total = all.modular(eta);
    if !(total > 0.0) {
        return Ok(false);
    }
    for k in [grid.k_min(), grid.k_max()] {
        let shell: Vec<Node> = nodes.iter().filter(|n| n.k == k).copied().collect();
        if shell.is_empty() {
            continue;
        }
        let m = build(&shell)?.modular(eta);
        if m >= EDGE_SHARE * total {
            return Ok(true);
        }
    }
    Ok(false)
}

pub(crate) fn check_dims(f: &dyn RealFunction, grid: &QuadratureGrid) -> Result<()> {
    if f.dim() != grid.dim() {
        Err(Error::DimensionMismatch { expected: grid.dim(), found: f.dim() })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketReport {
    /// `C = F_p(f w)`
    pub modular: f64,
    pub norm: f64,
    /// `min{C^{1/p_-}, C^{1/p_+}}`
    pub lower: f64,
    /// `max{C^{1/p_-}, C^{1/p_+}}`
    pub upper: f64,
    pub holds_i: bool,
    pub holds_ii: bool,
}

/// Relative slack of the bracket check.
const BRACKET_TOL: f64 = 1e-9;

/// Both directions of the modular-norm bracket with `C = F_p(f w)`.
pub fn modular_norm_bracket_check(
    f: &dyn RealFunction,
    p: &ExponentFunction,
    omega: &PowerWeight,
    grid: &QuadratureGrid,
) -> Result<BracketReport> {
    p.require_exponent()?;
    check_dims(f, grid)?;
    let nodes = grid.nodes_for(f);
    let samples = ModularSamples::build(f, p, omega, &nodes, None)?;
    let c = samples.modular(1.0);
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid("f", "bracket check needs 0 < F_p(f) < inf"));
    }
    let norm = luxemburg_from_samples(&samples)?;
    let a = math::powf(c, 1.0 / p.p_minus());
    let b = math::powf(c, 1.0 / p.p_plus());
    let (lower, upper) = (a.min(b), a.max(b));
    Ok(BracketReport {
        modular: c,
        norm,
        lower,
        upper,
        holds_i: norm <= upper * (1.0 + BRACKET_TOL),
        holds_ii: norm >= lower * (1.0 - BRACKET_TOL),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingVariant {
    /// `||1||_{L^r}` over the whole space.
    Full,
    /// `||chi_{supp f}||_{L^r}` in place of `||1||_{L^r}`.
    SupportRestricted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub variant: EmbeddingVariant,
    /// `r(.)` at the origin and at infinity.
    pub r_zero: f64,
    pub r_infty: Option<f64>,
    pub one_norm: f64,
    pub norm_q: f64,
    pub norm_p: f64,
    /// `||f||_q / (||1||_r ||f||_p)`; NaN for the zero function.
    pub empirical_k: f64,
    pub flags: Flags,
}

struct Indicator {
    dim: usize,
    radius: f64,
}

impl RealFunction for Indicator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, _: &Point) -> Result<f64> {
        Ok(1.0)
    }

    fn support_radius(&self) -> f64 {
        self.radius
    }
}

/// Empirical constant of the embedding `L^p_w -> L^q_w` for `q <= p`.
pub fn embedding_constant(
    f: &dyn RealFunction,
    p: &ExponentFunction,
    q: &ExponentFunction,
    omega: &PowerWeight,
    grid: &QuadratureGrid,
) -> Result<EmbeddingReport> {
    p.require_exponent()?;
    q.require_exponent()?;
    check_dims(f, grid)?;
    for node in grid.nodes() {
        let (qv, pv) = (q.eval(&node.x), p.eval(&node.x));
        if qv > pv {
            return Err(Error::HypothesisViolation {
                condition: "q <= p",
                witness: node.x,
                detail: alloc::format!("q = {qv} > p = {pv}"),
            });
        }
    }
    let inv_q = q.reciprocal(FunctionKind::Real)?;
    let inv_p = p.reciprocal(FunctionKind::Real)?;
    let inv_r = ExponentFunction::affine(q.dim(), FunctionKind::Real, 0.0, &[(1.0, &inv_q), (-1.0, &inv_p)])?;
    let mut r = inv_r.reciprocal(FunctionKind::Real)?;
    if r.p_minus() < 1.0 {
        // q <= p pointwise forces 1/r <= 1/q <= 1
        r = ExponentFunction::constant(q.dim(), f64::INFINITY).as_real();
    }
    let r = r.into_exponent()?;

    let mut flags = Flags::new();
    let norm_q = luxemburg_norm(f, q, omega, grid)?;
    let norm_p = luxemburg_norm(f, p, omega, grid)?;
    flags.extend(&norm_q.flags);
    flags.extend(&norm_p.flags);

    let (variant, one_norm) = if r.constant_value() == Some(f64::INFINITY) {
        (EmbeddingVariant::Full, 1.0)
    } else if r.p_infty() == Some(f64::INFINITY) {
        flags.insert(Flag::DomainTruncated);
        let one = Indicator { dim: grid.dim(), radius: f64::INFINITY };
        (EmbeddingVariant::Full, luxemburg_norm(&one, &r, &PowerWeight::UNIT, grid)?.value)
    } else {
        flags.insert(Flag::SupportRestricted);
        let radius = f.support_radius();
        if radius == f64::INFINITY {
            flags.insert(Flag::DomainTruncated);
        }
        let one = Indicator { dim: grid.dim(), radius };
        (EmbeddingVariant::SupportRestricted, luxemburg_norm(&one, &r, &PowerWeight::UNIT, grid)?.value)
    };

    let empirical_k = if norm_p.value == 0.0 {
        flags.insert(Flag::ZeroInput);
        f64::NAN
    } else {
        norm_q.value / (one_norm * norm_p.value)
    };
    Ok(EmbeddingReport {
        variant,
        r_zero: r.p_zero(),
        r_infty: r.p_infty(),
        one_norm,
        norm_q: norm_q.value,
        norm_p: norm_p.value,
        empirical_k,
        flags,
    })
}
