//! Norm requests: one catalog function measured in one named space.

use anyhow::{bail, Context, Result};
use hausdorff_core::exponents::{make_exponent, ExponentSpec, FunctionKind};
use hausdorff_core::norms::{
    bmo_norm, central_morrey_norm, cmo_norm, default_cubes, herz_morrey_norm, lipschitz_seminorm, luxemburg_norm,
    PairSampling,
};
use hausdorff_core::quadrature::{FunctionSpec, GridSpec, PowerWeight, QuadratureGrid, Rule, TestFunction};
use hausdorff_core::Flags;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// `L^{p(.)}_omega`
    LebesgueVexp,
    /// `K^{alpha(.), outer_p}_{p(.), omega}`
    Herz,
    /// `MK^{alpha(.), lambda}_{outer_p, p(.), omega}`
    MorreyHerz,
    /// `B^{p(.), lambda}_{|x|^ball_gamma, |x|^gamma}`
    CentralMorrey,
    /// `CMO^p(|x|^gamma)` with constant `p`
    Cmo,
    /// `Lip^beta`
    Lipschitz,
    Bmo,
}

fn default_grid() -> GridSpec {
    GridSpec { k_min: -24, k_max: 24, radial_nodes: 16, angular_nodes: 16, rule: Rule::GaussLegendre }
}

fn default_radii() -> (i32, i32) {
    (-12, 12)
}

fn default_k0() -> (i32, i32) {
    (-16, 16)
}

fn constant_one() -> ExponentSpec {
    ExponentSpec::Constant { value: 1.0 }
}

fn constant_zero() -> ExponentSpec {
    ExponentSpec::Constant { value: 0.0 }
}

/// A request of the `norm` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormRequest {
    pub dimension: usize,
    pub kind: NormKind,
    pub function: FunctionSpec,
    /// Inner exponent; constant for `cmo`.
    #[serde(default = "constant_one")]
    pub p: ExponentSpec,
    #[serde(default = "constant_zero")]
    pub alpha: ExponentSpec,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default = "one")]
    pub outer_p: f64,
    /// Power of the weight multiplying `f`.
    #[serde(default)]
    pub gamma: f64,
    /// Power of the weight measuring the balls of the central Morrey norm.
    #[serde(default)]
    pub ball_gamma: f64,
    #[serde(default = "one")]
    pub beta: f64,
    #[serde(default = "default_grid")]
    pub grid: GridSpec,
    #[serde(default = "default_radii")]
    pub radii: (i32, i32),
    #[serde(default = "default_k0")]
    pub k0_range: (i32, i32),
    #[serde(default)]
    pub lipschitz: PairSampling,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormOutcome {
    pub kind: NormKind,
    pub value: f64,
    /// Radius or truncation index attaining a supremum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax: Option<f64>,
    pub flags: Flags,
}

pub fn evaluate(req: &NormRequest) -> Result<NormOutcome> {
    let dim = req.dimension;
    let f = TestFunction::new(dim, req.function.clone()).context("function")?;
    let grid = QuadratureGrid::new(dim, req.grid).context("grid")?;
    let weight = PowerWeight::Constant(req.gamma);
    let radii: Vec<f64> = (req.radii.0..=req.radii.1).map(|j| 2f64.powi(j)).collect();
    let p = || make_exponent(dim, &req.p, FunctionKind::Exponent).context("p");
    let alpha = || make_exponent(dim, &req.alpha, FunctionKind::Real).context("alpha");
    let constant_p = || match req.p {
        ExponentSpec::Constant { value } => Ok(value),
        _ => bail!("`p` must be constant for {:?}", req.kind),
    };
    let (value, argmax, flags) = match req.kind {
        NormKind::LebesgueVexp => {
            let r = luxemburg_norm(&f, &p()?, &weight, &grid)?;
            (r.value, None, r.flags)
        }
        NormKind::Herz | NormKind::MorreyHerz => {
            let lambda = if req.kind == NormKind::Herz { 0.0 } else { req.lambda };
            let r = herz_morrey_norm(&f, &alpha()?, lambda, req.outer_p, &p()?, &weight, &grid, req.k0_range)?;
            (r.value, r.argmax_k0.map(f64::from), r.flags)
        }
        NormKind::CentralMorrey => {
            let ball = PowerWeight::Constant(req.ball_gamma);
            let r = central_morrey_norm(&f, &p()?, req.lambda, &ball, &weight, &grid, &radii)?;
            (r.value, Some(r.argmax), r.flags)
        }
        NormKind::Cmo => {
            let r = cmo_norm(&f, constant_p()?, &weight, &grid, &radii)?;
            (r.value, Some(r.argmax), r.flags)
        }
        NormKind::Lipschitz => {
            let r = lipschitz_seminorm(&f, req.beta, &req.lipschitz)?;
            (r.reconciled, None, r.flags)
        }
        NormKind::Bmo => (bmo_norm(&f, &default_cubes(dim))?, None, Flags::new()),
    };
    Ok(NormOutcome { kind: req.kind, value, argmax, flags })
}
