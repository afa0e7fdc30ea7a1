//! Versioned report envelope and its renderings.

use std::fmt::Write as _;

use anyhow::Result;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Format;

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

/// Every report carries the schema version, the command, the scenario file
/// name and the seed. Wall-clock timings are deliberately absent so that
/// reports are reproducible byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub source: String,
    pub seed: u64,
    /// Whether every exact invariant the command checks passed.
    pub passed: bool,
    pub body: Value,
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                s
            }
            Format::Plain => {
                let mut s = String::new();
                writeln!(s, "schema_version: {}", self.schema_version)?;
                writeln!(s, "command: {}", self.command)?;
                writeln!(s, "source: {}", self.source)?;
                writeln!(s, "seed: {}", self.seed)?;
                writeln!(s, "passed: {}", self.passed)?;
                flatten(&self.body, "", &mut s);
                s
            }
        })
    }
}

/// `a.b.0.c: value` lines, one per scalar leaf.
fn flatten(v: &Value, prefix: &str, out: &mut String) {
    let join = |k: &str| if prefix.is_empty() { k.to_owned() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(v, &join(k), out);
            }
        }
        Value::Array(items) if items.iter().all(|i| i.is_number()) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            let _ = writeln!(out, "{prefix}: [{}]", parts.join(", "));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(v, &join(&i.to_string()), out);
            }
        }
        Value::String(s) => {
            let _ = writeln!(out, "{prefix}: {s}");
        }
        other => {
            let _ = writeln!(out, "{prefix}: {other}");
        }
    }
}
