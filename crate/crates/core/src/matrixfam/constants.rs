use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::format;

use serde::{Deserialize, Serialize};

use super::{
    c_factor, commutator_gap, frobenius_norm, kernel_nodes, one_norm_theta, phi_factor, psi_factor,
    reduce_shells, shell_contributions, theta_star, varphi_factor, KernelSpec, Matrix, MatrixFamily,
};
use crate::error::{Error, Result};
use crate::exponents::{ExponentFunction, ThetaVariant};
use crate::flags::Flags;
use crate::math;
use crate::quadrature::QuadratureGrid;
use crate::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConstantId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
}

impl ConstantId {
    pub const ALL: [ConstantId; 7] =
        [ConstantId::C1, ConstantId::C2, ConstantId::C3, ConstantId::C4, ConstantId::C5, ConstantId::C6, ConstantId::C7];

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str().eq_ignore_ascii_case(s))
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConstantId::C1 => "C1",
            ConstantId::C2 => "C2",
            ConstantId::C3 => "C3",
            ConstantId::C4 => "C4",
            ConstantId::C5 => "C5",
            ConstantId::C6 => "C6",
            ConstantId::C7 => "C7",
        }
    }

    /// Constants carrying the `(2 - Theta*)^{m - 1/p}` factor.
    fn herz(self) -> bool {
        matches!(self, ConstantId::C2 | ConstantId::C5)
    }

    /// Constants with the CMO bracket instead of the commutator gap.
    fn cmo(self) -> bool {
        matches!(self, ConstantId::C4 | ConstantId::C5 | ConstantId::C7)
    }

    fn central(self) -> bool {
        matches!(self, ConstantId::C6 | ConstantId::C7)
    }
}

/// Per-family symbols a constant may reference. Absent values are reported
/// by name when a constant needs them.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantFamily {
    pub family: MatrixFamily,
    pub q: Option<ExponentFunction>,
    pub gamma: Option<f64>,
    pub lambda: Option<f64>,
    pub alpha0: Option<f64>,
    pub alpha_inf: Option<f64>,
    /// Power of the second weight `v_i = |x|^{alpha_i}` of the central spaces.
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub r: Option<f64>,
}

impl ConstantFamily {
    pub fn new(family: MatrixFamily) -> Self {
        Self { family, q: None, gamma: None, lambda: None, alpha0: None, alpha_inf: None, alpha: None, beta: None, r: None }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantInputs<'a> {
    pub kernel: &'a KernelSpec,
    pub families: &'a [ConstantFamily],
    pub zeta: Option<f64>,
    /// Target Herz exponent `p` of `(2 - Theta*)^{m - 1/p}`.
    pub p: Option<f64>,
    pub t_grid: &'a QuadratureGrid,
    /// Grid of `||1||_{L^theta}` when `theta` is not identically infinite.
    pub one_norm_grid: &'a QuadratureGrid,
    /// Points where the inclusion hypothesis on `q_i` is sampled.
    pub samples: &'a [Point],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    pub id: ConstantId,
    /// `+inf` when the shell contributions do not decay.
    pub value: f64,
    pub shells: Vec<(i32, f64)>,
    pub flags: Flags,
}

fn need<T: Copy>(v: Option<T>, name: &str, i: usize) -> Result<T> {
    v.ok_or_else(|| Error::MissingParameter(format!("{name}_{}", i + 1)))
}

/// Resolved parameters of family `i`.
struct Resolved<'a> {
    q: &'a ExponentFunction,
    gamma: f64,
    lambda: f64,
    alpha0: f64,
    alpha_inf: f64,
    alpha: f64,
    beta: f64,
    r: f64,
    q_inf: f64,
}

fn resolve<'a>(id: ConstantId, i: usize, f: &'a ConstantFamily) -> Result<Resolved<'a>> {
    let q = f.q.as_ref().ok_or_else(|| Error::MissingParameter(format!("q_{}", i + 1)))?;
    let gamma = need(f.gamma, "gamma", i)?;
    let lambda = match id {
        ConstantId::C1 | ConstantId::C4 | ConstantId::C6 | ConstantId::C7 => need(f.lambda, "lambda", i)?,
        _ => 0.0,
    };
    let (alpha0, alpha_inf) = match id {
        ConstantId::C1 | ConstantId::C2 | ConstantId::C4 | ConstantId::C5 => {
            (need(f.alpha0, "alpha0", i)?, need(f.alpha_inf, "alpha_inf", i)?)
        }
        _ => (0.0, 0.0),
    };
    let alpha = if id.central() { need(f.alpha, "alpha", i)? } else { 0.0 };
    let beta = if id.cmo() { 0.0 } else { need(f.beta, "beta", i)? };
    let r = if id.cmo() { need(f.r, "r", i)? } else { f64::INFINITY };
    let q_inf = if id.central() {
        q.p_infty().ok_or_else(|| Error::MissingParameter(format!("q_{}_inf", i + 1)))?
    } else {
        f64::NAN
    };
    Ok(Resolved { q, gamma, lambda, alpha0, alpha_inf, alpha, beta, r, q_inf })
}

/// The kernel integral `C_k` over the support of `Phi` on `t_grid`.
pub fn theorem_constant(id: ConstantId, inputs: &ConstantInputs<'_>) -> Result<ConstantReport> {
    let dim = inputs.t_grid.dim();
    let m = inputs.families.len();
    if m == 0 {
        return Err(Error::invalid("families", "need at least one family"));
    }
    let zeta = if id.central() { 1.0 } else { inputs.zeta.ok_or_else(|| Error::MissingParameter("zeta".to_string()))? };
    let p = if id.herz() { inputs.p.ok_or_else(|| Error::MissingParameter("p".to_string()))? } else { f64::NAN };
    let resolved: Vec<Resolved<'_>> =
        inputs.families.iter().enumerate().map(|(i, f)| resolve(id, i, f)).collect::<Result<_>>()?;
    for (f, r) in inputs.families.iter().zip(&resolved) {
        f.family.check(dim)?;
        if r.q.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: r.q.dim() });
        }
    }
    let variant = if id.central() { ThetaVariant::ThetaOne } else { ThetaVariant::Theta };
    let nodes = kernel_nodes(inputs.kernel, inputs.t_grid)?;
    let mut flags = Flags::new();
    let contributions = shell_contributions(&nodes, inputs.t_grid, |node| {
        let mats: Vec<Matrix> = inputs.families.iter().map(|f| f.family.eval(&node.t, dim)).collect();
        let theta = theta_star(&mats)?;
        let mut v = 1.0;
        if id.herz() {
            v *= math::powf(2.0 - theta as f64, m as f64 - 1.0 / p);
        }
        for (i, (f, r)) in inputs.families.iter().zip(&resolved).enumerate() {
            let a = &mats[i];
            let inv = a.inverse()?;
            let weight_power = if id.central() { r.alpha } else { r.gamma };
            let mut term = c_factor(a, &inv, r.q, weight_power);
            if id.central() {
                term *= math::powf(frobenius_norm(a), (dim as f64 + r.gamma) * (1.0 / r.q_inf + r.lambda));
            } else if id != ConstantId::C3 {
                term *= phi_factor(a, r.lambda, r.alpha0, r.alpha_inf, theta);
            }
            if id.cmo() {
                let s = f.family.scalar_part(&node.t, dim).ok_or_else(|| Error::HypothesisViolation {
                    condition: "H2",
                    witness: node.t,
                    detail: String::from("A(t) is not a scalar multiple of a rotation"),
                })?;
                let psi = psi_factor(a, &inv, weight_power);
                term *= 1.0
                    + math::powf(psi, 1.0 / r.r) * math::powf(math::abs(s), (weight_power + dim as f64) / r.r)
                    + varphi_factor(s);
            } else {
                term *= commutator_gap(a, r.beta);
            }
            if term == 0.0 {
                return Ok(0.0);
            }
            let (one, f1) = one_norm_theta(r.q, a, zeta, variant, inputs.one_norm_grid, inputs.samples)?;
            flags.extend(&f1);
            v *= term * one;
        }
        Ok(v)
    })?;
    let sum = reduce_shells(&contributions);
    flags.extend(&sum.flags);
    let k_min = inputs.t_grid.k_min();
    let shells = contributions.iter().enumerate().map(|(j, c)| (k_min + j as i32, *c)).collect();
    let value = if sum.divergent { f64::INFINITY } else { sum.value };
    Ok(ConstantReport { id, value, shells, flags })
}
