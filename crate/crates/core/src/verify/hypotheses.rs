use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::scenario::{PreparedScenario, SymbolSpace, TheoremId};
use crate::error::{Error, Result};
use crate::exponents::ThetaVariant;
use crate::flags::{Flag, Flags};
use crate::math;
use crate::matrixfam::{one_norm_theta, theorem_constant, ConstantId, ConstantInputs, ConstantReport};
use crate::norms::luxemburg_norm;
use crate::quadrature::{PowerWeight, RealFunction};
use crate::Point;

/// One named theorem condition and its outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisItem {
    pub name: String,
    pub passed: bool,
    /// The offending `t` or `x` on failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Point>,
    pub detail: String,
    #[serde(skip_serializing_if = "Flags::is_empty")]
    pub flags: Flags,
}

impl HypothesisItem {
    fn pass(name: &str, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), passed: true, witness: None, detail: detail.into(), flags: Flags::new() }
    }

    fn fail(name: &str, witness: Option<Point>, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), passed: false, witness, detail: detail.into(), flags: Flags::new() }
    }

    fn check(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            Self::pass(name, detail)
        } else {
            Self::fail(name, None, detail)
        }
    }
}

/// Hypotheses together with the theorem constant computed along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisOutcome {
    pub items: Vec<HypothesisItem>,
    pub constant: Option<ConstantReport>,
}

impl HypothesisOutcome {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|h| h.passed)
    }
}

/// Evaluates every condition of the scenario's theorem. Never fails: an
/// error while evaluating a condition is reported as that condition failing.
pub fn check_hypotheses(p: &PreparedScenario) -> Vec<HypothesisItem> {
    evaluate(p).items
}

pub(crate) fn evaluate(p: &PreparedScenario) -> HypothesisOutcome {
    let th = p.theorem();
    let m = p.arity();
    let n = p.dim as f64;
    let mut items = Vec::new();

    let want = th.symbol_space();
    let bad: Vec<usize> = (0..m).filter(|&i| p.scenario.symbols[i].space != want).collect();
    items.push(HypothesisItem::check(
        "symbol_spaces",
        bad.is_empty(),
        if bad.is_empty() {
            format!("every symbol declared in {want:?}")
        } else {
            format!("symbols {bad:?} are not declared in {want:?}")
        },
    ));

    if want == SymbolSpace::Lipschitz {
        let ok = p.beta.iter().all(|b| *b > 0.0 && *b <= 1.0);
        items.push(HypothesisItem::check("beta_range", ok, format!("beta_i = {:?} in (0, 1]", p.beta)));
    }

    items.push(input_exponent_class(p));
    items.push(inclusion(p));

    match &p.target {
        Ok(t) => {
            let ok = if th.is_central() { t.q.in_p_infty() } else { t.q.in_p_b() };
            items.push(HypothesisItem::check(
                "q_class",
                ok,
                format!("composed q in [{}, {}]", t.q.p_minus(), t.q.p_plus()),
            ));
        }
        Err(e) => items.push(HypothesisItem::fail("q_class", None, e.clone())),
    }

    if !th.is_central() && th != TheoremId::T33 {
        let bad: Vec<usize> = (0..m).filter(|&i| !(alpha_drop(p, i) >= 0.0)).collect();
        items.push(HypothesisItem::check(
            "DKalpha",
            bad.is_empty(),
            format!("alpha_i(0) - alpha_i(inf) = {:?}", (0..m).map(|i| alpha_drop(p, i)).collect::<Vec<_>>()),
        ));
    }

    match th {
        TheoremId::T31 | TheoremId::T32 => items.push(gamma_regime(p)),
        TheoremId::T33 => {
            let ok = p.gamma.iter().all(|g| *g < 0.0);
            items.push(HypothesisItem::check("gamma_negative", ok, format!("gamma_i = {:?}", p.gamma)));
            for i in 0..m {
                items.push(power_norm(p, i));
            }
        }
        TheoremId::T34 | TheoremId::T35 => {
            let ok = p.gamma.iter().all(|g| *g > -n);
            items.push(HypothesisItem::check("gamma_above_minus_n", ok, format!("gamma_i = {:?}", p.gamma)));
        }
        TheoremId::T36 | TheoremId::T37 => {}
    }

    if th.is_morrey_herz() {
        let ok = p.lambda.iter().all(|l| *l > 0.0);
        items.push(HypothesisItem::check("lambda_positive", ok, format!("lambda_i = {:?}", p.lambda)));
    }
    if th.is_morrey_herz() || th.is_herz() {
        let ex = &p.scenario.exponents;
        let pt = ex.p.unwrap_or(f64::NAN);
        let lo = if th.is_herz() { 1.0 } else { 0.0 };
        let in_range = |v: f64| if th.is_herz() { v >= lo && v < f64::INFINITY } else { v > lo && v < f64::INFINITY };
        let ok = in_range(pt) && ex.p_inputs.iter().all(|v| in_range(*v));
        items.push(HypothesisItem::check("p_range", ok, format!("p = {pt}, p_i = {:?}", ex.p_inputs)));
    }
    if th.is_herz() {
        let ok = p.lambda.iter().all(|l| *l == 0.0);
        items.push(HypothesisItem::check("lambda_zero", ok, format!("lambda_i = {:?}", p.lambda)));
        let ok = (0..m).all(|i| alpha_drop(p, i) == 0.0);
        items.push(HypothesisItem::check("alpha_ends_equal", ok, "alpha_i(0) = alpha_i(inf)"));
        let ex = &p.scenario.exponents;
        let sum: f64 = ex.p_inputs.iter().map(|v| 1.0 / v).sum();
        let target = 1.0 / ex.p.unwrap_or(f64::NAN);
        items.push(HypothesisItem::check(
            "DKpip",
            math::abs(sum - target) <= 1e-12 * target.max(1.0),
            format!("sum 1/p_i = {sum}, 1/p = {target}"),
        ));
    }
    if matches!(th, TheoremId::T34 | TheoremId::T35 | TheoremId::T37) {
        let bad: Vec<usize> = (0..m).filter(|&i| p.r[i].constant_value().is_none()).collect();
        items.push(HypothesisItem::check("H1", bad.is_empty(), format!("non-constant r_i at {bad:?}")));
        items.push(rotation_structure(p));
    }
    if th.is_central() {
        let mut ok = true;
        for i in 0..m {
            let qi = p.q[i].p_infty().unwrap_or(f64::NAN);
            ok &= p.lambda[i] > -1.0 / qi && p.lambda[i] < 0.0;
        }
        items.push(HypothesisItem::check("lambda_range", ok, format!("lambda_i = {:?} in (-1/q_i(inf), 0)", p.lambda)));
        let ok = (0..m).all(|i| p.gamma[i] > -n && p.alpha[i].constant_value().map_or(false, |a| a > -n));
        items.push(HypothesisItem::check("alpha_gamma_range", ok, "alpha_i, gamma_i constant and > -n"));
        let ok = (0..m).all(|i| p.r[i].constant_value().map_or(false, |r| r > 0.0 && r.is_finite()));
        items.push(HypothesisItem::check("r_range", ok, "r_i constant in (0, inf)"));
        items.push(balance(p));
    }

    let (item, constant) = constant_item(p);
    items.push(item);
    HypothesisOutcome { items, constant }
}

fn alpha_drop(p: &PreparedScenario, i: usize) -> f64 {
    match p.alpha[i].p_infty() {
        Some(inf) => p.alpha[i].p_zero() - inf,
        None => f64::NAN,
    }
}

fn input_exponent_class(p: &PreparedScenario) -> HypothesisItem {
    let central = p.theorem().is_central();
    for (i, q) in p.q.iter().enumerate() {
        let ok = if central { q.in_p_infty() } else { q.in_p_b() };
        if !ok {
            return HypothesisItem::fail(
                "q_i_class",
                None,
                format!("q_{} in [{}, {}] is outside {}", i + 1, q.p_minus(), q.p_plus(), if central { "P_inf" } else { "P_b" }),
            );
        }
    }
    HypothesisItem::pass("q_i_class", if central { "every q_i in P_inf" } else { "every q_i in P_b" })
}

/// `q_i(A_i^{-1}(t) .) <= zeta q_i(.)` and `||1||_{L^theta} < inf` at the sampled `t`.
fn inclusion(p: &PreparedScenario) -> HypothesisItem {
    let (name, variant, zeta) = if p.theorem().is_central() {
        ("DKnhung1", ThetaVariant::ThetaOne, 1.0)
    } else {
        ("DKnhung", ThetaVariant::Theta, p.zeta())
    };
    let ts = match p.hypothesis_t_points() {
        Ok(ts) => ts,
        Err(e) => return HypothesisItem::fail(name, None, e.to_string()),
    };
    let mut flags = Flags::new();
    let mut worst: f64 = 0.0;
    for t in &ts {
        for (i, fam) in p.scenario.families.iter().enumerate() {
            let a = fam.eval(t, p.dim);
            match one_norm_theta(&p.q[i], &a, zeta, variant, &p.one_norm_grid, &p.samples) {
                Ok((v, f)) if v.is_finite() => {
                    worst = worst.max(v);
                    flags.extend(&f);
                }
                Ok(_) => {
                    return HypothesisItem::fail(name, Some(*t), format!("||1||_theta infinite for family {}", i + 1));
                }
                Err(Error::HypothesisViolation { witness, detail, .. }) => {
                    return HypothesisItem::fail(
                        name,
                        Some(*t),
                        format!("family {} at x = {:?}: {detail}", i + 1, &witness[..p.dim]),
                    );
                }
                Err(e) => return HypothesisItem::fail(name, Some(*t), e.to_string()),
            }
        }
    }
    let mut item = HypothesisItem::pass(name, format!("{} t-points, max ||1||_theta = {worst}", ts.len()));
    item.flags = flags;
    item
}

/// The three alternatives on `gamma_i` and the extremal values of `r_i`.
fn gamma_regime(p: &PreparedScenario) -> HypothesisItem {
    let n = p.dim as f64;
    let r_at = |sel: fn(&crate::exponents::ExponentFunction) -> (f64, Option<f64>)| {
        p.r.iter().map(move |r| sel(r))
    };
    let decreasing = r_at(|r| (r.p_zero() - r.p_plus(), r.p_infty().map(|v| v - r.p_minus())))
        .all(|(a, b)| a == 0.0 && b == Some(0.0));
    let increasing = r_at(|r| (r.p_zero() - r.p_minus(), r.p_infty().map(|v| v - r.p_plus())))
        .all(|(a, b)| a == 0.0 && b == Some(0.0));
    if p.gamma.iter().all(|g| *g > -n) && decreasing {
        HypothesisItem::pass("DKgammari", "gamma_i > -n with r_i(0) = r_i+ and r_i(inf) = r_i-")
    } else if p.gamma.iter().all(|g| *g < -n) && increasing {
        HypothesisItem::pass("DKgammari", "gamma_i < -n with r_i(0) = r_i- and r_i(inf) = r_i+")
    } else if p.gamma.iter().all(|g| *g == -n) {
        HypothesisItem::pass("DKgammari", "gamma_i = -n")
    } else {
        HypothesisItem::fail("DKgammari", None, format!("no alternative holds for gamma_i = {:?}", p.gamma))
    }
}

/// `x -> |x|^{beta + gamma / r(x)}`
struct PowerOfNorm<'a> {
    dim: usize,
    beta: f64,
    gamma: f64,
    r: &'a crate::exponents::ExponentFunction,
}

impl RealFunction for PowerOfNorm<'_> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Point) -> Result<f64> {
        Ok(math::powf(math::norm(x, self.dim), self.beta + self.gamma / self.r.eval(x)))
    }
}

/// `|| |.|^{beta_i + gamma_i / r_i(.)} ||_{L^{r_i}_{omega_i}}` over the grid annulus.
fn power_norm(p: &PreparedScenario, i: usize) -> HypothesisItem {
    let name = "DK|x|^betai";
    let f = PowerOfNorm { dim: p.dim, beta: p.beta[i], gamma: p.gamma[i], r: &p.r[i] };
    let r = match p.r[i].clone().into_exponent() {
        Ok(r) => r,
        Err(e) => return HypothesisItem::fail(name, None, format!("r_{}: {e}", i + 1)),
    };
    match luxemburg_norm(&f, &r, &PowerWeight::Constant(p.gamma[i]), &p.x_grid) {
        Ok(v) if v.value.is_finite() => {
            let mut item = HypothesisItem::pass(name, format!("family {}: {} over the grid annulus", i + 1, v.value));
            item.flags = v.flags;
            item.flags.insert(Flag::DomainTruncated);
            item
        }
        Ok(v) => HypothesisItem::fail(name, None, format!("family {}: norm {}", i + 1, v.value)),
        Err(e) => HypothesisItem::fail(name, None, format!("family {}: {e}", i + 1)),
    }
}

/// `A_i(t) = s_i(t) a_i(t)` with `a_i(t)` a rotation and `s_i(t) != 0`.
fn rotation_structure(p: &PreparedScenario) -> HypothesisItem {
    let ts = match p.hypothesis_t_points() {
        Ok(ts) => ts,
        Err(e) => return HypothesisItem::fail("H2", None, e.to_string()),
    };
    for t in &ts {
        for (i, fam) in p.scenario.families.iter().enumerate() {
            match fam.scalar_part(t, p.dim) {
                Some(s) if s != 0.0 && s.is_finite() => {}
                _ => {
                    return HypothesisItem::fail(
                        "H2",
                        Some(*t),
                        format!("A_{}(t) is not a non-zero multiple of a rotation", i + 1),
                    );
                }
            }
        }
    }
    HypothesisItem::pass("H2", format!("{} t-points", ts.len()))
}

fn balance(p: &PreparedScenario) -> HypothesisItem {
    let name = if p.theorem() == TheoremId::T36 { "DKlambda" } else { "DKlambda1" };
    let Ok(t) = &p.target else {
        return HypothesisItem::fail(name, None, "target parameters unavailable");
    };
    let balanced = t.balanced_lambda.unwrap_or(f64::NAN);
    match p.scenario.exponents.target_lambda {
        None => HypothesisItem::pass(name, format!("target lambda solved: {balanced}")),
        Some(l) => HypothesisItem::check(
            name,
            math::abs(l - balanced) <= 1e-12 * balanced.abs().max(1.0),
            format!("declared lambda {l}, balance requires {balanced}"),
        ),
    }
}

/// `C_k` with the scenario's kernel, families and grids.
pub fn scenario_constant(p: &PreparedScenario, id: ConstantId) -> Result<ConstantReport> {
    let families = p.constant_families();
    let inputs = ConstantInputs {
        kernel: &p.scenario.kernel,
        families: &families,
        zeta: Some(p.zeta()),
        p: p.scenario.exponents.p,
        t_grid: &p.t_grid,
        one_norm_grid: &p.one_norm_grid,
        samples: &p.samples,
    };
    theorem_constant(id, &inputs)
}

fn constant_item(p: &PreparedScenario) -> (HypothesisItem, Option<ConstantReport>) {
    let id = p.theorem().constant();
    let name = "constant_finite";
    match scenario_constant(p, id) {
        Ok(c) => {
            let mut item = HypothesisItem::check(name, c.value.is_finite(), format!("{} = {}", id.as_str(), c.value));
            item.flags = c.flags.clone();
            (item, Some(c))
        }
        Err(Error::HypothesisViolation { condition, witness, detail }) => (
            HypothesisItem::fail(name, Some(witness), format!("{}: {condition}: {detail}", id.as_str())),
            None,
        ),
        Err(e) => (HypothesisItem::fail(name, None, format!("{}: {e}", id.as_str())), None),
    }
}
