//! One function per command; each returns the report body and whether the
//! exact invariants it checks passed.

use anyhow::{Context, Result};
use hausdorff_core::exponents::sample_directions;
use hausdorff_core::operators::apply_report;
use hausdorff_core::verify::{
    scenario_constant, verify_theorem, PreparedScenario, ScanBase, ScanFamily, ScanReport, Scenario,
};
use hausdorff_core::{Flags, Point};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::files::load;
use crate::norm::{evaluate, NormRequest};

/// Loads and prepares the scenario named by the config.
pub fn prepare(config: &RunConfig) -> Result<PreparedScenario> {
    let scenario: Scenario = load(&config.scenario, &config.overrides)?;
    PreparedScenario::new(scenario).with_context(|| format!("scenario {}", config.scenario.display()))
}

/// Twenty points `2^{j/2} u`, `j in [-10, 9]`, cycling through the sampling directions.
pub fn probe_points(dim: usize) -> Vec<Point> {
    let dirs = sample_directions(dim);
    (-10..10)
        .enumerate()
        .map(|(i, j)| {
            let r = 2f64.powf(f64::from(j) / 2.0);
            let u = dirs[i % dirs.len()];
            [u[0] * r, u[1] * r, u[2] * r]
        })
        .collect()
}

pub fn norm(config: &RunConfig) -> Result<(Value, bool)> {
    let req: NormRequest = load(&config.scenario, &config.overrides)?;
    let out = evaluate(&req)?;
    Ok((serde_json::to_value(out)?, true))
}

#[derive(Serialize)]
struct ApplyPoint {
    x: Point,
    value: Option<f64>,
    flags: Flags,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

pub fn apply(config: &RunConfig) -> Result<(Value, bool)> {
    let p = prepare(config)?;
    let points: Vec<ApplyPoint> = probe_points(p.dim)
        .into_iter()
        .map(|x| match apply_report(&p.operator, &x) {
            Ok(r) => ApplyPoint { x, value: Some(r.value), flags: r.flags, error: None },
            Err(e) => ApplyPoint { x, value: None, flags: Flags::new(), error: Some(e.to_string()) },
        })
        .collect();
    let ok = points.iter().all(|p| p.error.is_none());
    Ok((json!({ "scenario": p.scenario.name, "points": points }), ok))
}

pub fn constant(config: &RunConfig) -> Result<(Value, bool)> {
    let p = prepare(config)?;
    let id = config.constant.unwrap_or_else(|| p.theorem().constant());
    let c = scenario_constant(&p, id)?;
    let ok = c.value.is_finite();
    Ok((json!({ "scenario": p.scenario.name, "id": c.id, "value": c.value, "flags": c.flags, "shells": c.shells }), ok))
}

pub fn verify(config: &RunConfig) -> Result<(Value, bool)> {
    let p = prepare(config)?;
    let r = verify_theorem(&p)?;
    let ok = r.hypotheses_pass && r.ratio.is_some_and(|x| x.is_finite());
    Ok((serde_json::to_value(r)?, ok))
}

/// Largest `|ratio / base - 1|` over the members; infinite when a member failed.
pub fn homogeneity_deviation(report: &ScanReport) -> f64 {
    report
        .members
        .iter()
        .map(|m| match m.ratio {
            Some(r) if r.is_finite() => {
                if report.base_ratio == 0.0 {
                    r.abs()
                } else {
                    (r / report.base_ratio - 1.0).abs()
                }
            }
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

/// Ratio scan with members evaluated on the current rayon pool and
/// collected in parameter order.
pub fn parallel_scan(p: &PreparedScenario, family: ScanFamily, parameters: &[f64]) -> Result<ScanReport> {
    let base = ScanBase::new(p.clone())?;
    let members = parameters.par_iter().map(|&c| base.member(family, c)).collect();
    Ok(base.summarize(family, members))
}

pub fn scan(config: &RunConfig) -> Result<(Value, bool)> {
    let p = prepare(config)?;
    let params = if config.parameters.is_empty() { config.family.default_parameters() } else { config.parameters.clone() };
    let r = parallel_scan(&p, config.family, &params)?;
    // only the scaling families are exact invariants
    let (deviation, ok) = match config.family {
        ScanFamily::Dilation => (None, true),
        _ => {
            let d = homogeneity_deviation(&r);
            (Some(d), d <= p.scenario.tolerances.homogeneity)
        }
    };
    let mut body = serde_json::to_value(&r)?;
    body["scenario"] = json!(p.scenario.name);
    body["homogeneity_deviation"] = json!(deviation);
    Ok((body, ok))
}
