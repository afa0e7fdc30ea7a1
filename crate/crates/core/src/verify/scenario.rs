use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{log_sweep, make_exponent, sample_points, ExponentFunction, ExponentSpec, FunctionKind};
use crate::math;
use crate::matrixfam::{ConstantFamily, ConstantId, KernelSpec, MatrixFamily};
use crate::norms::PairSampling;
use crate::operators::OperatorSpec;
use crate::quadrature::{FunctionSpec, GridSpec, PowerWeight, QuadratureGrid, Rule, TestFunction};
use crate::Point;

/// The seven boundedness theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "T3.1")]
    T31,
    #[serde(rename = "T3.2")]
    T32,
    #[serde(rename = "T3.3")]
    T33,
    #[serde(rename = "T3.4")]
    T34,
    #[serde(rename = "T3.5")]
    T35,
    #[serde(rename = "T3.6")]
    T36,
    #[serde(rename = "T3.7")]
    T37,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] =
        [TheoremId::T31, TheoremId::T32, TheoremId::T33, TheoremId::T34, TheoremId::T35, TheoremId::T36, TheoremId::T37];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T31 => "T3.1",
            TheoremId::T32 => "T3.2",
            TheoremId::T33 => "T3.3",
            TheoremId::T34 => "T3.4",
            TheoremId::T35 => "T3.5",
            TheoremId::T36 => "T3.6",
            TheoremId::T37 => "T3.7",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.as_str() == s)
    }

    pub fn constant(self) -> ConstantId {
        match self {
            TheoremId::T31 => ConstantId::C1,
            TheoremId::T32 => ConstantId::C2,
            TheoremId::T33 => ConstantId::C3,
            TheoremId::T34 => ConstantId::C4,
            TheoremId::T35 => ConstantId::C5,
            TheoremId::T36 => ConstantId::C6,
            TheoremId::T37 => ConstantId::C7,
        }
    }

    pub fn symbol_space(self) -> SymbolSpace {
        match self {
            TheoremId::T31 | TheoremId::T32 | TheoremId::T33 | TheoremId::T36 => SymbolSpace::Lipschitz,
            _ => SymbolSpace::Cmo,
        }
    }

    pub fn is_central(self) -> bool {
        matches!(self, TheoremId::T36 | TheoremId::T37)
    }

    /// Herz target with `lambda = 0`.
    pub fn is_herz(self) -> bool {
        matches!(self, TheoremId::T32 | TheoremId::T35)
    }

    pub fn is_morrey_herz(self) -> bool {
        matches!(self, TheoremId::T31 | TheoremId::T34)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolSpace {
    Lipschitz,
    Cmo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    pub space: SymbolSpace,
    pub function: FunctionSpec,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentSection {
    /// `q_i`
    pub q: Vec<ExponentSpec>,
    /// `r_i`
    #[serde(default)]
    pub r: Vec<ExponentSpec>,
    /// `alpha_i`; constant for the central theorems
    #[serde(default)]
    pub alpha: Vec<ExponentSpec>,
    #[serde(default)]
    pub lambda: Vec<f64>,
    #[serde(default)]
    pub beta: Vec<f64>,
    #[serde(default = "one")]
    pub zeta: f64,
    /// Outer exponent `p` of the target Herz-type space.
    #[serde(default)]
    pub p: Option<f64>,
    /// Outer exponents `p_i` of the source spaces.
    #[serde(default)]
    pub p_inputs: Vec<f64>,
    /// Target `lambda` of the central theorems; solved from the balance
    /// condition when absent.
    #[serde(default)]
    pub target_lambda: Option<f64>,
    /// Target weight power `gamma` of the central theorems.
    #[serde(default)]
    pub target_gamma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSection {
    /// Powers `gamma_i` of `omega_i = |x|^{gamma_i}`.
    #[serde(default)]
    pub gamma: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub j_min: i32,
    pub j_max: i32,
    pub per_octave: u32,
}

fn x_grid() -> GridSpec {
    GridSpec { k_min: -24, k_max: 24, radial_nodes: 16, angular_nodes: 16, rule: Rule::GaussLegendre }
}

fn t_grid() -> GridSpec {
    GridSpec { k_min: -64, k_max: 4, radial_nodes: 32, angular_nodes: 16, rule: Rule::GaussLegendre }
}

fn one_norm_grid() -> GridSpec {
    GridSpec { k_min: -16, k_max: 16, radial_nodes: 16, angular_nodes: 16, rule: Rule::GaussLegendre }
}

fn radii() -> (i32, i32) {
    (-12, 12)
}

fn k0_range() -> (i32, i32) {
    (-16, 16)
}

fn samples() -> SweepSpec {
    SweepSpec { j_min: -16, j_max: 16, per_octave: 2 }
}

fn t_points() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    /// Grid of the `x`-space norms.
    #[serde(default = "x_grid")]
    pub x: GridSpec,
    /// Grid of the `t`-integrals (operator and constants).
    #[serde(default = "t_grid")]
    pub t: GridSpec,
    /// Grid of `||1||_{L^theta}` when `theta` is not identically infinite.
    #[serde(default = "one_norm_grid")]
    pub one_norm: GridSpec,
    /// Ball radii `2^j` of the central Morrey and CMO suprema.
    #[serde(default = "radii")]
    pub radii: (i32, i32),
    /// Truncation indices of the Morrey-Herz supremum.
    #[serde(default = "k0_range")]
    pub k0_range: (i32, i32),
    /// Points where pointwise exponent conditions are sampled.
    #[serde(default = "samples")]
    pub samples: SweepSpec,
    /// Number of `t`-nodes where pointwise `t`-conditions are sampled.
    #[serde(default = "t_points")]
    pub hypothesis_t_points: usize,
    #[serde(default)]
    pub lipschitz: PairSampling,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            x: x_grid(),
            t: t_grid(),
            one_norm: one_norm_grid(),
            radii: radii(),
            k0_range: k0_range(),
            samples: samples(),
            hypothesis_t_points: t_points(),
            lipschitz: PairSampling::default(),
        }
    }
}

fn homogeneity() -> f64 {
    1e-12
}

fn vanishing() -> f64 {
    1e-12
}

fn drift() -> f64 {
    0.05
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "homogeneity")]
    pub homogeneity: f64,
    #[serde(default = "vanishing")]
    pub vanishing: f64,
    #[serde(default = "drift")]
    pub drift: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { homogeneity: homogeneity(), vanishing: vanishing(), drift: drift() }
    }
}

/// A theorem instance: operator, spaces, parameters and numerics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub theorem: TheoremId,
    pub dimension: usize,
    pub arity: usize,
    pub kernel: KernelSpec,
    pub families: Vec<MatrixFamily>,
    pub exponents: ExponentSection,
    #[serde(default)]
    pub weights: WeightSection,
    pub symbols: Vec<SymbolSpec>,
    pub inputs: Vec<FunctionSpec>,
    #[serde(default)]
    pub grids: GridSection,
    #[serde(default)]
    pub tolerances: Tolerances,
}

/// A function space with every parameter resolved.
#[derive(Debug, Clone, PartialEq)]
pub enum Space {
    /// `MK^{alpha, lambda}_{p, q, omega}`; the Herz space when `lambda = 0`.
    MorreyHerz { alpha: ExponentFunction, lambda: f64, p: f64, q: ExponentFunction, omega: PowerWeight },
    /// `L^q_omega`
    Lebesgue { q: ExponentFunction, omega: PowerWeight },
    /// `B^{q, lambda}_{omega, v}`: `omega` measures the balls, `v` weights the norm.
    CentralMorrey { q: ExponentFunction, lambda: f64, omega: PowerWeight, v: PowerWeight },
}

/// Target parameters derived from the per-input parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetParameters {
    pub space: Space,
    pub beta: f64,
    pub lambda: f64,
    /// `q` before the `zeta` scaling.
    pub q: ExponentFunction,
    /// Value the balance condition prescribes for the target `lambda`
    /// (central theorems only).
    pub balanced_lambda: Option<f64>,
}

/// A validated scenario with its grids, functions and operator built.
#[derive(Debug, Clone)]
pub struct PreparedScenario {
    pub scenario: Scenario,
    pub dim: usize,
    pub q: Vec<ExponentFunction>,
    pub r: Vec<ExponentFunction>,
    pub alpha: Vec<ExponentFunction>,
    pub lambda: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub inputs: Vec<TestFunction>,
    pub symbols: Vec<TestFunction>,
    pub x_grid: QuadratureGrid,
    pub t_grid: QuadratureGrid,
    pub one_norm_grid: QuadratureGrid,
    pub radii: Vec<f64>,
    pub samples: Vec<Point>,
    pub operator: OperatorSpec,
    /// Composition of the target space; the error text when the composed
    /// exponents leave their classes.
    pub target: core::result::Result<TargetParameters, String>,
}

fn scenario_err(msg: impl Into<String>) -> Error {
    Error::Scenario(msg.into())
}

fn expect_len<T>(v: &[T], m: usize, name: &str) -> Result<()> {
    if v.len() == m {
        Ok(())
    } else {
        Err(scenario_err(format!("`{name}` has {} entries, arity is {m}", v.len())))
    }
}

impl PreparedScenario {
    pub fn new(scenario: Scenario) -> Result<Self> {
        let dim = scenario.dimension;
        let m = scenario.arity;
        if !(1..=crate::MAX_DIM).contains(&dim) {
            return Err(scenario_err("dimension must be 1, 2 or 3"));
        }
        if m == 0 {
            return Err(scenario_err("arity must be at least 1"));
        }
        let th = scenario.theorem;
        let ex = &scenario.exponents;
        expect_len(&scenario.families, m, "families")?;
        expect_len(&scenario.inputs, m, "inputs")?;
        expect_len(&scenario.symbols, m, "symbols")?;
        expect_len(&ex.q, m, "exponents.q")?;
        expect_len(&ex.r, m, "exponents.r")?;
        expect_len(&scenario.weights.gamma, m, "weights.gamma")?;
        if th.is_central() || th.is_herz() || th.is_morrey_herz() {
            expect_len(&ex.alpha, m, "exponents.alpha")?;
            expect_len(&ex.lambda, m, "exponents.lambda")?;
        }
        if th.symbol_space() == SymbolSpace::Lipschitz {
            expect_len(&ex.beta, m, "exponents.beta")?;
        }
        if th.is_herz() || th.is_morrey_herz() {
            expect_len(&ex.p_inputs, m, "exponents.p_inputs")?;
            if ex.p.is_none() {
                return Err(Error::MissingParameter("p".to_string()));
            }
        }
        if th.is_central() && ex.target_gamma.is_none() {
            return Err(Error::MissingParameter("target_gamma".to_string()));
        }
        if !(ex.zeta > 0.0 && ex.zeta.is_finite()) {
            return Err(Error::invalid("zeta", "must be positive and finite"));
        }

        let q: Vec<ExponentFunction> =
            ex.q.iter().map(|s| make_exponent(dim, s, FunctionKind::Exponent)).collect::<Result<_>>()?;
        let r: Vec<ExponentFunction> =
            ex.r.iter().map(|s| make_exponent(dim, s, FunctionKind::Real)).collect::<Result<_>>()?;
        let alpha: Vec<ExponentFunction> = if ex.alpha.is_empty() {
            (0..m).map(|_| ExponentFunction::real_constant(dim, 0.0)).collect()
        } else {
            expect_len(&ex.alpha, m, "exponents.alpha")?;
            ex.alpha.iter().map(|s| make_exponent(dim, s, FunctionKind::Real)).collect::<Result<_>>()?
        };
        let lambda = if ex.lambda.is_empty() { alloc::vec![0.0; m] } else { ex.lambda.clone() };
        expect_len(&lambda, m, "exponents.lambda")?;
        let beta = if ex.beta.is_empty() { alloc::vec![0.0; m] } else { ex.beta.clone() };
        expect_len(&beta, m, "exponents.beta")?;
        let gamma = scenario.weights.gamma.clone();

        let inputs: Vec<TestFunction> =
            scenario.inputs.iter().map(|f| TestFunction::new(dim, f.clone())).collect::<Result<_>>()?;
        let symbols: Vec<TestFunction> =
            scenario.symbols.iter().map(|s| TestFunction::new(dim, s.function.clone())).collect::<Result<_>>()?;

        let g = &scenario.grids;
        let x_grid = QuadratureGrid::new(dim, g.x)?;
        let t_grid = QuadratureGrid::new(dim, g.t)?;
        let one_norm_grid = QuadratureGrid::new(dim, g.one_norm)?;
        if g.radii.0 > g.radii.1 {
            return Err(Error::invalid("grids.radii", "need j_min <= j_max"));
        }
        let radii: Vec<f64> = (g.radii.0..=g.radii.1).map(math::exp2i).collect();
        let samples = sample_points(dim, &log_sweep(g.samples.j_min, g.samples.j_max, g.samples.per_octave));

        let operator = OperatorSpec::new(
            scenario.kernel.clone(),
            scenario.families.clone(),
            Some(symbols.clone()),
            inputs.clone(),
            t_grid.clone(),
        )?;

        let mut prepared = Self {
            dim,
            q,
            r,
            alpha,
            lambda,
            beta,
            gamma,
            inputs,
            symbols,
            x_grid,
            t_grid,
            one_norm_grid,
            radii,
            samples,
            operator,
            target: Err(String::new()),
            scenario,
        };
        prepared.target = prepared.compose_target().map_err(|e| e.to_string());
        Ok(prepared)
    }

    pub fn theorem(&self) -> TheoremId {
        self.scenario.theorem
    }

    pub fn arity(&self) -> usize {
        self.scenario.arity
    }

    pub fn zeta(&self) -> f64 {
        self.scenario.exponents.zeta
    }

    /// The same scenario with the symbols replaced.
    pub fn with_symbol_functions(&self, symbols: Vec<TestFunction>) -> Result<Self> {
        let mut out = self.clone();
        out.operator = self.operator.with_symbols(Some(symbols.clone()))?;
        out.symbols = symbols;
        Ok(out)
    }

    /// The same scenario with the inputs replaced.
    pub fn with_input_functions(&self, inputs: Vec<TestFunction>) -> Result<Self> {
        let mut out = self.clone();
        out.operator = self.operator.with_inputs(inputs.clone())?;
        out.inputs = inputs;
        Ok(out)
    }

    fn weight(&self, i: usize) -> PowerWeight {
        PowerWeight::Constant(self.gamma[i])
    }

    fn constant_r(&self, i: usize) -> Result<f64> {
        self.r[i].constant_value().ok_or_else(|| scenario_err(format!("r_{} must be constant", i + 1)))
    }

    /// The space of the `i`-th input.
    pub fn source_space(&self, i: usize) -> Result<Space> {
        let th = self.theorem();
        let zq = || self.q[i].scaled(self.zeta());
        Ok(if th.is_central() {
            let a = self.alpha[i]
                .constant_value()
                .ok_or_else(|| scenario_err(format!("alpha_{} must be constant", i + 1)))?;
            Space::CentralMorrey {
                q: self.q[i].clone(),
                lambda: self.lambda[i],
                omega: self.weight(i),
                v: PowerWeight::Constant(a),
            }
        } else if th == TheoremId::T33 {
            Space::Lebesgue { q: zq()?, omega: self.weight(i) }
        } else {
            Space::MorreyHerz {
                alpha: self.alpha[i].clone(),
                lambda: if th.is_herz() { 0.0 } else { self.lambda[i] },
                p: self.scenario.exponents.p_inputs[i],
                q: zq()?,
                omega: self.weight(i),
            }
        })
    }

    fn compose_target(&self) -> Result<TargetParameters> {
        let th = self.theorem();
        let dim = self.dim;
        let n = dim as f64;
        if th.is_central() {
            let r: Vec<f64> = (0..self.arity()).map(|i| self.constant_r(i)).collect::<Result<_>>()?;
            let alphas: Vec<f64> = (0..self.arity())
                .map(|i| {
                    self.alpha[i]
                        .constant_value()
                        .ok_or_else(|| scenario_err(format!("alpha_{} must be constant", i + 1)))
                })
                .collect::<Result<_>>()?;
            let c = crate::exponents::compose_central_parameters(dim, &self.beta, &alphas, &r, &self.q)?;
            let gamma = self.scenario.exponents.target_gamma.unwrap_or(0.0);
            let q_inf = c.q.p_infty().ok_or_else(|| scenario_err("composed q has no limit at infinity"))?;
            let mut lhs = c.alpha - gamma / q_inf;
            if th == TheoremId::T36 {
                lhs += c.beta;
            }
            for i in 0..self.arity() {
                let qi = self.q[i].p_infty().ok_or_else(|| scenario_err(format!("q_{} has no limit at infinity", i + 1)))?;
                lhs += (self.gamma[i] + n) * self.lambda[i] - alphas[i] + self.gamma[i] / qi;
            }
            let balanced = lhs / (gamma + n);
            let lambda = self.scenario.exponents.target_lambda.unwrap_or(balanced);
            return Ok(TargetParameters {
                space: Space::CentralMorrey {
                    q: c.q.clone(),
                    lambda,
                    omega: PowerWeight::Constant(gamma),
                    v: PowerWeight::Constant(c.alpha),
                },
                beta: c.beta,
                lambda,
                q: c.q,
                balanced_lambda: Some(balanced),
            });
        }
        let input = crate::exponents::CompositionInput {
            dim,
            betas: &self.beta,
            lambdas: &self.lambda,
            gammas: &self.gamma,
            r: &self.r,
            q: &self.q,
            alpha: &self.alpha,
        };
        let c = crate::exponents::compose_theorem_exponents(&input, &self.samples)?;
        let omega = PowerWeight::Variable(c.gamma.clone());
        let zq = c.q.scaled(self.zeta())?;
        let p = self.scenario.exponents.p.unwrap_or(1.0);
        let space = match th {
            TheoremId::T31 => Space::MorreyHerz { alpha: c.alpha_star.clone(), lambda: c.lambda, p, q: zq, omega },
            TheoremId::T32 => Space::MorreyHerz { alpha: c.alpha_star.clone(), lambda: 0.0, p, q: c.q.clone(), omega },
            TheoremId::T33 => Space::Lebesgue { q: c.q.clone(), omega },
            TheoremId::T34 | TheoremId::T35 => {
                let alpha = c
                    .alpha_star_star
                    .clone()
                    .ok_or_else(|| scenario_err("alpha** needs every r_i constant"))?;
                if th == TheoremId::T34 {
                    Space::MorreyHerz { alpha, lambda: c.lambda, p, q: zq, omega }
                } else {
                    Space::MorreyHerz { alpha, lambda: 0.0, p, q: c.q.clone(), omega }
                }
            }
            TheoremId::T36 | TheoremId::T37 => unreachable!(),
        };
        Ok(TargetParameters { space, beta: c.beta, lambda: c.lambda, q: c.q, balanced_lambda: None })
    }

    /// Per-family parameters of the theorem constant.
    pub fn constant_families(&self) -> Vec<ConstantFamily> {
        (0..self.arity())
            .map(|i| {
                let mut f = ConstantFamily::new(self.scenario.families[i].clone());
                f.q = Some(self.q[i].clone());
                f.gamma = Some(self.gamma[i]);
                f.lambda = Some(self.lambda[i]);
                f.alpha0 = Some(self.alpha[i].p_zero());
                f.alpha_inf = self.alpha[i].p_infty();
                f.alpha = self.alpha[i].constant_value();
                f.beta = Some(self.beta[i]);
                f.r = self.r[i].constant_value();
                f
            })
            .collect()
    }

    /// The kernel `t`-nodes at which pointwise `t`-conditions are sampled:
    /// an evenly strided subset of the kernel support on the `t`-grid.
    pub fn hypothesis_t_points(&self) -> Result<Vec<Point>> {
        let nodes = crate::matrixfam::kernel_nodes(&self.scenario.kernel, &self.t_grid)?;
        let want = self.scenario.grids.hypothesis_t_points.max(1);
        if nodes.len() <= want {
            return Ok(nodes.iter().map(|n| n.t).collect());
        }
        let stride = nodes.len() as f64 / want as f64;
        Ok((0..want).map(|j| nodes[(j as f64 * stride) as usize].t).collect())
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::quadrature::Shape;

    /// Base desk scenario: `n = m = 1`, `Phi(t) = t` on `(0, 1]`, `A(t) = t`,
    /// `f = |x|^{1/2}` on `|x| <= 1`, `b(x) = x`.
    pub fn desk(theorem: TheoremId) -> Scenario {
        let cmo = theorem.symbol_space() == SymbolSpace::Cmo;
        let symbol = if cmo { Shape::Gaussian } else { Shape::Linear { coefficients: Vec::new() } };
        let lambda = match theorem {
            TheoremId::T31 | TheoremId::T34 => alloc::vec![0.5],
            TheoremId::T36 | TheoremId::T37 => alloc::vec![-0.25],
            _ => alloc::vec![0.0],
        };
        let gamma = if theorem == TheoremId::T33 { -0.5 } else { 0.0 };
        Scenario {
            name: format!("desk {theorem}"),
            description: String::new(),
            theorem,
            dimension: 1,
            arity: 1,
            kernel: KernelSpec::PowerCube { coefficient: 1.0, norm_power: 0.0, coord_powers: alloc::vec![1.0] },
            families: alloc::vec![MatrixFamily::coordinate(0)],
            exponents: ExponentSection {
                q: alloc::vec![ExponentSpec::Constant { value: 2.0 }],
                r: alloc::vec![ExponentSpec::Constant { value: 4.0 }],
                alpha: alloc::vec![ExponentSpec::Constant { value: 0.0 }],
                lambda,
                beta: if cmo { Vec::new() } else { alloc::vec![1.0] },
                zeta: 1.0,
                p: Some(2.0),
                p_inputs: alloc::vec![2.0],
                target_lambda: None,
                target_gamma: if theorem.is_central() { Some(0.0) } else { None },
            },
            weights: WeightSection { gamma: alloc::vec![gamma] },
            symbols: alloc::vec![SymbolSpec {
                space: if cmo { SymbolSpace::Cmo } else { SymbolSpace::Lipschitz },
                function: FunctionSpec::new(symbol),
            }],
            inputs: alloc::vec![FunctionSpec::new(Shape::TruncatedPower { a: 0.5, radius: 1.0 })],
            grids: GridSection {
                x: GridSpec { k_min: -16, k_max: 16, radial_nodes: 12, angular_nodes: 1, rule: Rule::GaussLegendre },
                t: GridSpec { k_min: -48, k_max: 2, radial_nodes: 16, angular_nodes: 1, rule: Rule::GaussLegendre },
                radii: (-8, 8),
                k0_range: (-12, 12),
                ..GridSection::default()
            },
            tolerances: Tolerances::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::desk;
    use super::*;

    #[test]
    fn theorem_ids_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(TheoremId::parse(t.as_str()), Some(t));
        }
        assert_eq!(TheoremId::T34.constant(), ConstantId::C4);
        assert_eq!(TheoremId::T36.symbol_space(), SymbolSpace::Lipschitz);
        assert_eq!(TheoremId::T37.symbol_space(), SymbolSpace::Cmo);
    }

    #[test]
    fn desk_target_exponents() {
        let p = PreparedScenario::new(desk(TheoremId::T31)).unwrap();
        let t = p.target.clone().unwrap();
        // 1/q = 1/2 + 1/4
        assert!((t.q.constant_value().unwrap() - 4.0 / 3.0).abs() < 1e-15);
        match t.space {
            Space::MorreyHerz { alpha, lambda, .. } => {
                // alpha* = 0 - 1 - 1/4
                assert!((alpha.constant_value().unwrap() + 1.25).abs() < 1e-15);
                assert_eq!(lambda, 0.5);
            }
            other => panic!("{other:?}"),
        }
        let p = PreparedScenario::new(desk(TheoremId::T34)).unwrap();
        match p.target.unwrap().space {
            Space::MorreyHerz { alpha, .. } => assert!((alpha.constant_value().unwrap() + 0.25).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn central_target_lambda_is_balanced() {
        let p = PreparedScenario::new(desk(TheoremId::T36)).unwrap();
        let t = p.target.unwrap();
        // beta + alpha - gamma/q_inf + (gamma_1 + n) lambda_1 - alpha_1 + gamma_1/q_1inf = 1 - 1/4
        assert!((t.lambda - 0.75).abs() < 1e-15);
        let p = PreparedScenario::new(desk(TheoremId::T37)).unwrap();
        assert!((p.target.unwrap().lambda + 0.25).abs() < 1e-15);
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let mut s = desk(TheoremId::T33);
        s.inputs.push(s.inputs[0].clone());
        assert!(matches!(PreparedScenario::new(s), Err(Error::Scenario(_))));
        let mut s = desk(TheoremId::T32);
        s.exponents.p = None;
        assert_eq!(PreparedScenario::new(s).unwrap_err(), Error::MissingParameter("p".into()));
    }

    #[test]
    fn infeasible_composition_is_kept_as_text() {
        let mut s = desk(TheoremId::T33);
        s.arity = 2;
        s.families.push(s.families[0].clone());
        s.inputs.push(s.inputs[0].clone());
        s.symbols.push(s.symbols[0].clone());
        s.exponents.q = alloc::vec![ExponentSpec::Constant { value: 2.0 }; 2];
        s.exponents.r = alloc::vec![ExponentSpec::Constant { value: 2.0 }; 2];
        s.exponents.beta = alloc::vec![1.0; 2];
        s.exponents.alpha = alloc::vec![ExponentSpec::Constant { value: 0.0 }; 2];
        s.exponents.lambda = alloc::vec![0.0; 2];
        s.exponents.p_inputs = alloc::vec![2.0; 2];
        s.weights.gamma = alloc::vec![-0.5; 2];
        let p = PreparedScenario::new(s).unwrap();
        assert!(p.target.unwrap_err().contains("q in P"));
    }
}
