use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::hypotheses::{evaluate, HypothesisItem};
use super::scenario::{PreparedScenario, Space, SymbolSpace, TheoremId};
use crate::error::{Error, Result};
use crate::flags::{Flag, Flags};
use crate::matrixfam::ConstantId;
use crate::norms::{central_morrey_norm, cmo_norm, herz_morrey_norm, lipschitz_seminorm, luxemburg_norm};
use crate::operators::OperatorOutput;
use crate::quadrature::{PowerWeight, RealFunction, TestFunction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantSummary {
    pub id: ConstantId,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub scenario: String,
    pub theorem: TheoremId,
    pub hypotheses: Vec<HypothesisItem>,
    pub hypotheses_pass: bool,
    pub constant: Option<ConstantSummary>,
    /// Target norm of the commutator output; absent when a hypothesis failed.
    pub lhs: Option<f64>,
    pub source_norms: Vec<f64>,
    pub symbol_norms: Vec<f64>,
    /// `C_k * prod source norms * prod symbol norms`
    pub rhs_core: Option<f64>,
    pub ratio: Option<f64>,
    pub flags: Flags,
}

/// Both sides of the conclusion for one choice of inputs and symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct Sides {
    pub lhs: f64,
    pub source_norms: Vec<f64>,
    pub symbol_norms: Vec<f64>,
    pub flags: Flags,
}

fn with_context(e: Error, what: &str) -> Error {
    match e {
        Error::NormInfinite { context } => Error::infinite(format!("{what}: {context}")),
        other => other,
    }
}

/// Norm of `f` in `space` over the scenario's `x`-grid.
pub fn space_norm(p: &PreparedScenario, space: &Space, f: &dyn RealFunction) -> Result<(f64, Flags)> {
    match space {
        Space::MorreyHerz { alpha, lambda, p: outer, q, omega } => {
            let r = herz_morrey_norm(f, alpha, *lambda, *outer, q, omega, &p.x_grid, p.scenario.grids.k0_range)?;
            Ok((r.value, r.flags))
        }
        Space::Lebesgue { q, omega } => {
            let r = luxemburg_norm(f, q, omega, &p.x_grid)?;
            let mut flags = r.flags;
            flags.insert(Flag::DomainTruncated);
            Ok((r.value, flags))
        }
        Space::CentralMorrey { q, lambda, omega, v } => {
            let r = central_morrey_norm(f, q, *lambda, omega, v, &p.x_grid, &p.radii)?;
            Ok((r.value, r.flags))
        }
    }
}

/// Seminorm of the `i`-th symbol in its declared space.
pub fn symbol_norm(p: &PreparedScenario, i: usize, b: &TestFunction) -> Result<(f64, Flags)> {
    match p.theorem().symbol_space() {
        SymbolSpace::Lipschitz => {
            let r = lipschitz_seminorm(b, p.beta[i], &p.scenario.grids.lipschitz)?;
            Ok((r.reconciled, r.flags))
        }
        SymbolSpace::Cmo => {
            let r = p.r[i].constant_value().ok_or_else(|| Error::Scenario(format!("r_{} must be constant", i + 1)))?;
            let rep = cmo_norm(b, r, &PowerWeight::Constant(p.gamma[i]), &p.x_grid, &p.radii)?;
            Ok((rep.value, rep.flags))
        }
    }
}

/// Target norm of the output and every source and symbol norm.
pub fn evaluate_sides(p: &PreparedScenario) -> Result<Sides> {
    let target = p.target.as_ref().map_err(|e| Error::Scenario(e.clone()))?;
    let mut flags = Flags::new();
    let out = OperatorOutput::new(&p.operator);
    let (lhs, f) = space_norm(p, &target.space, &out).map_err(|e| with_context(e, "target norm of the output"))?;
    flags.extend(&f);
    let mut source_norms = Vec::with_capacity(p.arity());
    for (i, f) in p.inputs.iter().enumerate() {
        let space = p.source_space(i)?;
        let (v, fl) = space_norm(p, &space, f).map_err(|e| with_context(e, &format!("source norm {}", i + 1)))?;
        flags.extend(&fl);
        source_norms.push(v);
    }
    let mut symbol_norms = Vec::with_capacity(p.arity());
    for (i, b) in p.symbols.iter().enumerate() {
        let (v, fl) = symbol_norm(p, i, b).map_err(|e| with_context(e, &format!("symbol norm {}", i + 1)))?;
        flags.extend(&fl);
        symbol_norms.push(v);
    }
    Ok(Sides { lhs, source_norms, symbol_norms, flags })
}

/// `(rhs_core, ratio, flags)` from the sides and the constant.
pub fn ratio_of(constant: f64, sides: &Sides) -> (f64, f64, Flags) {
    let mut flags = Flags::new();
    let rhs = constant * sides.source_norms.iter().product::<f64>() * sides.symbol_norms.iter().product::<f64>();
    let ratio = if sides.lhs == 0.0 {
        0.0
    } else if rhs == 0.0 {
        flags.insert(Flag::InequalityDegenerate);
        f64::INFINITY
    } else {
        sides.lhs / rhs
    };
    (rhs, ratio, flags)
}

/// Checks the hypotheses, then evaluates both sides of the theorem's
/// conclusion. A failed hypothesis short-circuits with HYPOTHESIS_FAIL.
pub fn verify_theorem(p: &PreparedScenario) -> Result<VerificationReport> {
    let outcome = evaluate(p);
    let hypotheses_pass = outcome.all_pass();
    let constant = outcome.constant.as_ref().map(|c| ConstantSummary { id: c.id, value: c.value });
    let mut report = VerificationReport {
        scenario: p.scenario.name.clone(),
        theorem: p.theorem(),
        hypotheses: outcome.items.clone(),
        hypotheses_pass,
        constant: constant.clone(),
        lhs: None,
        source_norms: Vec::new(),
        symbol_norms: Vec::new(),
        rhs_core: None,
        ratio: None,
        flags: Flags::new(),
    };
    for h in &outcome.items {
        report.flags.extend(&h.flags);
    }
    if !hypotheses_pass {
        report.flags.insert(Flag::HypothesisFail);
        return Ok(report);
    }
    let c = constant.map(|c| c.value).unwrap_or(f64::NAN);
    let sides = evaluate_sides(p)?;
    let (rhs, ratio, f) = ratio_of(c, &sides);
    report.flags.extend(&sides.flags);
    report.flags.extend(&f);
    report.lhs = Some(sides.lhs);
    report.source_norms = sides.source_norms;
    report.symbol_norms = sides.symbol_norms;
    report.rhs_core = Some(rhs);
    report.ratio = Some(ratio);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::super::scenario::fixtures::desk;
    use super::*;
    use crate::matrixfam::KernelSpec;
    use crate::quadrature::Shape;

    #[test]
    fn desk_scenarios_verify_to_finite_ratios() {
        for th in TheoremId::ALL {
            let p = PreparedScenario::new(desk(th)).unwrap();
            let r = verify_theorem(&p).unwrap();
            assert!(r.hypotheses_pass, "{th}");
            let ratio = r.ratio.unwrap();
            assert!(ratio.is_finite() && ratio > 0.0, "{th}: {r:?}");
        }
    }

    #[test]
    fn lebesgue_desk_source_norm_closed_form() {
        // int (|x|^{1/2} |x|^{-1/2})^2 dx over 2^-17 < |x| <= 1 is 2 - 2^-16
        let p = PreparedScenario::new(desk(TheoremId::T33)).unwrap();
        let r = verify_theorem(&p).unwrap();
        let exact = (2.0 - 2f64.powi(-16)).sqrt();
        assert!((r.source_norms[0] - exact).abs() < 1e-12, "{:?}", r.source_norms);
        assert!((r.symbol_norms[0] - 1.0).abs() < 1e-15);
        assert!((r.constant.unwrap().value - 0.5).abs() < 1e-9);
        assert!(r.flags.contains(Flag::DomainTruncated));
    }

    #[test]
    fn constant_symbol_gives_zero_lhs() {
        let mut s = desk(TheoremId::T31);
        s.symbols[0].function = Shape::Constant { value: 3.0 }.into();
        let p = PreparedScenario::new(s).unwrap();
        let r = verify_theorem(&p).unwrap();
        assert_eq!(r.lhs, Some(0.0));
        assert_eq!(r.ratio, Some(0.0));
    }

    #[test]
    fn zero_kernel_short_circuits() {
        let mut s = desk(TheoremId::T33);
        s.kernel = KernelSpec::Zero;
        let p = PreparedScenario::new(s).unwrap();
        let r = verify_theorem(&p).unwrap();
        assert_eq!(r.constant.unwrap().value, 0.0);
        assert_eq!(r.lhs, Some(0.0));
    }

    #[test]
    fn failed_hypothesis_short_circuits() {
        let mut s = desk(TheoremId::T33);
        s.weights.gamma = alloc::vec![0.0];
        let p = PreparedScenario::new(s).unwrap();
        let r = verify_theorem(&p).unwrap();
        assert!(!r.hypotheses_pass && r.flags.contains(Flag::HypothesisFail));
        assert_eq!(r.lhs, None);
        // the t-grid stops at 2^-48, dropping 2^-23 of the Beta integral
        assert!((r.constant.unwrap().value - 4.0 / 3.0).abs() < 1e-6);
    }
}
