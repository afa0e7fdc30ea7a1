//! Scenario files, reports and the command-line front end of `hausdorff-core`.
//!
//! [`run`] dispatches a [`RunConfig`] to one command and wraps its output in
//! a versioned [`Report`]. The `suite` command runs the invariant suite over
//! a directory of scenarios.

pub mod commands;
pub mod config;
pub mod files;
pub mod norm;
pub mod report;
pub mod suite;

use std::fs;

use anyhow::{Context, Result};

pub use config::{Command, Format, Override, RunConfig, DEFAULT_SEED};
pub use report::{Report, SCHEMA_VERSION};

/// Runs one command on a pool of `config.workers` threads.
pub fn run(config: &RunConfig) -> Result<Report> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .context("cannot start the worker pool")?;
    let (body, passed) = pool.install(|| match config.command {
        Command::Norm => commands::norm(config),
        Command::Apply => commands::apply(config),
        Command::Constant => commands::constant(config),
        Command::Verify => commands::verify(config),
        Command::Scan => commands::scan(config),
        Command::Suite => {
            let r = suite::run_suite(&config.scenario, config.seed)?;
            let passed = r.passed;
            Ok((serde_json::to_value(r)?, passed))
        }
    })?;
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: config.command.to_string(),
        source: files::display_name(&config.scenario),
        seed: config.seed,
        passed,
        body,
    })
}

/// Writes the rendered report to `config.out`, or stdout when absent.
pub fn emit(report: &Report, config: &RunConfig) -> Result<()> {
    let text = report.render(config.format)?;
    match &config.out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
