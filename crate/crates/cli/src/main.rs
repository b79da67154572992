use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use lefschetz_cli::{emit_report, run_scenario, Format, Overrides};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

/// Run a scenario of Lefschetz coincidence, index and degree computations.
#[derive(Debug, Parser)]
#[command(name = "lefschetz", version)]
struct Args {
    /// Scenario file (TOML).
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Tolerance for floating point expectations.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    quadrature_order: Option<usize>,
    /// Seed for oracle regular values.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of order/sample doublings allowed.
    #[arg(long)]
    max_budget: Option<usize>,
    /// Include per-task wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let overrides = Overrides {
        tolerance: args.tolerance,
        quadrature_order: args.quadrature_order,
        seed: args.seed,
        max_budget: args.max_budget,
        timing: args.timing,
    };
    let report = match run_scenario(&args.scenario, &overrides) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {:#}", anyhow::Error::new(e));
            return ExitCode::from(2);
        }
    };
    let format = match args.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    print!("{}", emit_report(&report, format));
    for t in &report.tasks {
        if let Some(e) = &t.error {
            eprintln!("error in task {} ({}): {}", t.index, t.name, e.message);
        }
    }
    ExitCode::from(report.summary.exit_code as u8)
}
