use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hausdorff::{emit, run, Command, Format, Override, RunConfig, DEFAULT_SEED};
use hausdorff_core::matrixfam::ConstantId;
use hausdorff_core::verify::ScanFamily;

#[derive(Parser)]
#[command(author, version, about = "Hausdorff operator commutators on variable-exponent spaces")]
struct Args {
    /// Scenario file (a directory of scenarios for `suite`)
    #[arg(long, default_value = "scenarios")]
    scenario: PathBuf,
    /// One of norm, apply, constant, verify, scan, suite
    #[arg(long)]
    command: Command,
    /// Report file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Worker threads; 1 is the determinism reference
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Scenario edit `path=value`, e.g. `grids.x.radial_nodes=24`
    #[arg(long = "set", value_name = "PATH=VALUE")]
    overrides: Vec<Override>,
    /// Constant to report (`constant` only), e.g. C3
    #[arg(long, value_parser = parse_constant)]
    constant: Option<ConstantId>,
    /// Scan family: dilation, amplitude or symbol_scale
    #[arg(long, default_value = "dilation", value_parser = parse_family)]
    family: ScanFamily,
    /// Scan parameters; the family defaults when absent
    #[arg(long, value_delimiter = ',')]
    parameters: Vec<f64>,
}

fn parse_constant(s: &str) -> Result<ConstantId, String> {
    ConstantId::parse(s).ok_or_else(|| format!("unknown constant `{s}` (expected C1 to C7)"))
}

fn parse_family(s: &str) -> Result<ScanFamily, String> {
    ScanFamily::parse(s).ok_or_else(|| format!("unknown family `{s}` (expected dilation, amplitude or symbol_scale)"))
}

fn main() -> ExitCode {
    let a = Args::parse();
    let config = RunConfig {
        command: a.command,
        scenario: a.scenario,
        overrides: a.overrides,
        out: a.out,
        format: a.format,
        workers: a.workers,
        seed: a.seed,
        constant: a.constant,
        family: a.family,
        parameters: a.parameters,
    };
    match run(&config).and_then(|r| emit(&r, &config).map(|_| r.passed)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
