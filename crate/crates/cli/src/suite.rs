//! The invariant suite over a directory of scenarios.
//!
//! Exact invariants gate the outcome; approximate quantities (the dilation
//! drift) are reported next to them with `exact: false`.

use std::path::Path;

use anyhow::Result;
use hausdorff_core::matrixfam::{det_bounds_check, theta_from_rho, Matrix};
use hausdorff_core::operators::apply;
use hausdorff_core::quadrature::{Shape, TestFunction};
use hausdorff_core::verify::{
    check_hypotheses, evaluate_sides, proof_inequality_check, verify_theorem, PreparedScenario, ProofCheckId,
    ScanFamily, ScanReport, Scenario, VerificationReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::commands::{homogeneity_deviation, parallel_scan, probe_points};
use crate::files::{display_name, load, scenario_files};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// Exact checks gate the suite; the others are reported only.
    pub exact: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    pub detail: String,
}

impl Check {
    fn exact(name: impl Into<String>, passed: bool, value: Option<f64>, detail: impl Into<String>) -> Self {
        Self { name: name.into(), exact: true, passed, value, detail: detail.into() }
    }

    fn error(name: impl Into<String>, e: impl std::fmt::Display) -> Self {
        Self::exact(name, false, None, e.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioResult {
    pub file: String,
    pub name: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dilation: Option<ScanReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub scenarios: Vec<ScenarioResult>,
    pub global: Vec<Check>,
    pub passed: bool,
}

/// Runs every check on every top-level scenario of `dir`.
pub fn run_suite(dir: &Path, seed: u64) -> Result<SuiteReport> {
    let files = scenario_files(dir)?;
    let scenarios: Vec<ScenarioResult> = files.par_iter().map(|f| scenario_checks(f)).collect();
    let global = vec![det_bounds_sweep(seed, 100), theta_sweep()];
    let passed = scenarios.iter().flat_map(|s| &s.checks).chain(&global).all(|c| !c.exact || c.passed);
    Ok(SuiteReport { scenarios, global, passed })
}

fn scenario_checks(file: &Path) -> ScenarioResult {
    let mut result =
        ScenarioResult { file: display_name(file), name: String::new(), checks: Vec::new(), verification: None, dilation: None };
    let prepared = load::<Scenario>(file, &[]).and_then(|s| Ok(PreparedScenario::new(s)?));
    let p = match prepared {
        Ok(p) => p,
        Err(e) => {
            result.checks.push(Check::error("load", format!("{e:#}")));
            return result;
        }
    };
    result.name = p.scenario.name.clone();
    let checks = &mut result.checks;

    let report = match verify_theorem(&p) {
        Ok(r) => r,
        Err(e) => {
            checks.push(Check::error("verify", e));
            return result;
        }
    };
    let failed: Vec<&str> = report.hypotheses.iter().filter(|h| !h.passed).map(|h| h.name.as_str()).collect();
    checks.push(Check::exact("hypotheses", report.hypotheses_pass, None, format!("failed: {failed:?}")));
    let ratio = report.ratio.unwrap_or(f64::NAN);
    checks.push(Check::exact("ratio_finite", ratio.is_finite() && ratio >= 0.0, Some(ratio), "lhs / rhs_core"));

    let again = check_hypotheses(&p);
    checks.push(Check::exact(
        "hypotheses_deterministic",
        again == report.hypotheses && again == check_hypotheses(&p),
        None,
        format!("{} items", again.len()),
    ));

    for i in 0..p.arity() {
        checks.push(vanishing(&p, i));
    }

    if report.hypotheses_pass {
        for family in [ScanFamily::Amplitude, ScanFamily::SymbolScale] {
            let name = format!("homogeneity_{}", family.as_str());
            checks.push(match parallel_scan(&p, family, &family.default_parameters()) {
                Ok(r) => {
                    let d = homogeneity_deviation(&r);
                    Check::exact(name, d <= p.scenario.tolerances.homogeneity, Some(d), "max |ratio / base - 1|")
                }
                Err(e) => Check::error(name, e),
            });
        }
        checks.push(shell_transport(&p));
        match parallel_scan(&p, ScanFamily::Dilation, &ScanFamily::Dilation.default_parameters()) {
            Ok(r) => {
                checks.push(Check {
                    name: "dilation_drift".into(),
                    exact: false,
                    passed: r.sup_ratio.is_finite() && r.drift < p.scenario.tolerances.drift,
                    value: Some(r.drift),
                    detail: format!("sup_ratio {}, excluded {:?}", r.sup_ratio, r.excluded),
                });
                result.dilation = Some(r);
            }
            Err(e) => checks.push(Check { exact: false, ..Check::error("dilation_drift", e) }),
        }
    }
    result.verification = Some(report);
    result
}

/// `b_i` replaced by a constant: the commutator vanishes at the probe
/// points and the target norm of the output is exactly zero.
fn vanishing(p: &PreparedScenario, i: usize) -> Check {
    let name = format!("vanishing_b{}", i + 1);
    let run = || -> hausdorff_core::Result<(f64, f64)> {
        let mut symbols = p.symbols.clone();
        symbols[i] = TestFunction::new(p.dim, Shape::Constant { value: 1.5 })?;
        let moved = p.with_symbol_functions(symbols)?;
        let mut worst: f64 = 0.0;
        for x in probe_points(p.dim) {
            worst = worst.max(apply(&moved.operator, &x)?.abs());
        }
        Ok((worst, evaluate_sides(&moved)?.lhs))
    };
    match run() {
        Ok((worst, lhs)) => Check::exact(
            name,
            worst <= p.scenario.tolerances.vanishing && lhs == 0.0,
            Some(worst),
            format!("max |apply| over 20 points, lhs = {lhs}"),
        ),
        Err(e) => Check::error(name, e),
    }
}

/// `t` values of the shell-transport check, on the diagonal of `(0, 1]^n`.
pub const TRANSPORT_T: [f64; 3] = [0.25, 0.5, 0.75];

/// Shell indices of the shell-transport check.
pub const TRANSPORT_K: std::ops::RangeInclusive<i32> = -8..=8;

fn shell_transport(p: &PreparedScenario) -> Check {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for i in 0..p.arity() {
        for t in TRANSPORT_T {
            let mut tp = [0.0; 3];
            tp[..p.dim].fill(t);
            for k in TRANSPORT_K {
                match proof_inequality_check(p, ProofCheckId::ShellTransport, i, &tp, k) {
                    Ok(r) => {
                        worst = worst.max(r.empirical_constant);
                        count += 1;
                    }
                    Err(e) => return Check::error("shell_transport", format!("family {}, t = {t}, k = {k}: {e}", i + 1)),
                }
            }
        }
    }
    Check::exact("shell_transport", worst.is_finite(), Some(worst), format!("largest empirical constant over {count} checks"))
}

/// A random matrix with entries in `[-1, 1]` and a dominant diagonal of
/// random sign, so its condition number stays moderate.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e: f64 = rng.gen_range(-1.0..=1.0);
                    if i == j {
                        e + if rng.gen_bool(0.5) { 2.5 } else { -2.5 }
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(&rows).expect("square rows")
}

/// Determinant bounds on `count` seeded random 2x2 and 3x3 matrices.
pub fn det_bounds_sweep(seed: u64, count: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for j in 0..count {
        let a = random_matrix(&mut rng, 2 + j % 2);
        if !det_bounds_check(&a).is_ok_and(|b| b.holds) {
            failures += 1;
        }
    }
    Check::exact("det_bounds", failures == 0, Some(failures as f64), format!("{failures} failures over {count} matrices"))
}

/// `rho` values of the Theta bracketing sweep: exact powers of two, their
/// neighbours in the last bit, and irrational values.
pub fn theta_sweep_values() -> Vec<f64> {
    let mut out = vec![1.0, 2.0, 3.0, std::f64::consts::SQRT_2, std::f64::consts::PI, std::f64::consts::E];
    for k in -60..=60 {
        let p = 2f64.powi(k);
        out.extend([p, p * (1.0 + f64::EPSILON), p * (1.0 - f64::EPSILON / 2.0), p * std::f64::consts::SQRT_2]);
    }
    out
}

pub fn theta_sweep() -> Check {
    let values = theta_sweep_values();
    let bad: Vec<f64> = values
        .iter()
        .copied()
        .filter(|&rho| match theta_from_rho(rho) {
            Ok(t) => !(2f64.powi(t) * rho < 1.0 && 1.0 <= 2f64.powi(t + 1) * rho),
            Err(_) => true,
        })
        .collect();
    Check::exact("theta_bracketing", bad.is_empty(), Some(bad.len() as f64), format!("{} values, failures {bad:?}", values.len()))
}
