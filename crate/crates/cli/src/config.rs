use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use hausdorff_core::matrixfam::ConstantId;
use hausdorff_core::verify::ScanFamily;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Norm,
    Apply,
    Constant,
    Verify,
    Scan,
    Suite,
}

impl Command {
    pub const ALL: [Command; 6] =
        [Command::Norm, Command::Apply, Command::Constant, Command::Verify, Command::Scan, Command::Suite];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Norm => "norm",
            Command::Apply => "apply",
            Command::Constant => "constant",
            Command::Verify => "verify",
            Command::Scan => "scan",
            Command::Suite => "suite",
        }
    }
}

impl FromStr for Command {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match Command::ALL.into_iter().find(|c| c.as_str() == s) {
            Some(c) => Ok(c),
            None => bail!("unknown command `{s}` (expected one of norm, apply, constant, verify, scan, suite)"),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Plain,
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "plain" => Ok(Format::Plain),
            _ => bail!("unknown format `{s}` (expected json or plain)"),
        }
    }
}

/// A `path=value` edit applied to the scenario document before it is
/// deserialized. The value is parsed as JSON, falling back to a string.
#[derive(Debug, Clone, PartialEq)]
pub struct Override {
    pub path: Vec<String>,
    pub value: serde_json::Value,
}

impl FromStr for Override {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (path, value) = s.split_once('=').with_context(|| format!("override `{s}` is not of the form path=value"))?;
        let path: Vec<String> = path.split('.').map(str::to_owned).collect();
        if path.iter().any(|k| k.is_empty()) {
            bail!("override path `{}` has an empty segment", path.join("."));
        }
        let value = serde_json::from_str(value).unwrap_or_else(|_| serde_json::Value::String(value.to_owned()));
        Ok(Override { path, value })
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    /// Scenario file; a directory of scenarios for `suite`.
    pub scenario: PathBuf,
    pub overrides: Vec<Override>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub workers: usize,
    pub seed: u64,
    /// Constant to report instead of the theorem's own (`constant` only).
    pub constant: Option<ConstantId>,
    /// Family of `scan`.
    pub family: ScanFamily,
    /// Parameters of `scan`; the family defaults when empty.
    pub parameters: Vec<f64>,
}

impl RunConfig {
    pub fn new(command: Command, scenario: impl Into<PathBuf>) -> Self {
        Self {
            command,
            scenario: scenario.into(),
            overrides: Vec::new(),
            out: None,
            format: Format::Json,
            workers: 1,
            seed: DEFAULT_SEED,
            constant: None,
            family: ScanFamily::Dilation,
            parameters: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_commands_and_formats() {
        for c in Command::ALL {
            assert_eq!(c.as_str().parse::<Command>().unwrap(), c);
        }
        assert!("verfy".parse::<Command>().is_err());
        assert_eq!("plain".parse::<Format>().unwrap(), Format::Plain);
        assert!("yaml".parse::<Format>().is_err());
    }

    #[test]
    fn parses_overrides() {
        let o: Override = "grids.x.radial_nodes=24".parse().unwrap();
        assert_eq!(o.path, ["grids", "x", "radial_nodes"]);
        assert_eq!(o.value, serde_json::json!(24));
        let o: Override = "theorem=T3.3".parse().unwrap();
        assert_eq!(o.value, serde_json::json!("T3.3"));
        assert!("grids..x=1".parse::<Override>().is_err());
        assert!("grids".parse::<Override>().is_err());
    }
}
