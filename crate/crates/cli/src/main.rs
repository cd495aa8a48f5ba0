//! `fluctua`: Casimir forces and radiative heat transfer between planar
//! bodies out of thermal equilibrium.
//!
//! ```text
//! fluctua <scenario> --config <file> [--out <file>] [--format csv|json] [--tol <x>]
//! ```
//!
//! Exit codes: 0 on success, 2 on a configuration error, 3 when one or
//! more sweep points failed to converge (the remaining rows are still
//! written).

mod config;
mod emit;
mod sweep;

use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

/// Casimir-Lifshitz forces and heat transfer for planar bodies at three
/// temperatures (two bodies plus the environment).
#[derive(Debug, Parser)]
#[command(name = "fluctua", version, about)]
struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    scenario: config::Scenario,

    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Output file (standard output when omitted).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format, overriding the config file.
    #[arg(long, value_enum)]
    format: Option<config::OutputFormat>,

    /// Relative quadrature tolerance, overriding the config file.
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Executes one run end to end.
///
/// # Returns
///
/// `Ok(true)` when every sweep point succeeded, `Ok(false)` when at least
/// one point failed numerically (output still written), `Err` on
/// configuration problems.
fn run(cli: &Cli) -> Result<bool, String> {
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| format!("cannot read config {}: {e}", cli.config.display()))?;
    let run_config = config::parse_config(
        &text,
        cli.scenario,
        cli.tol,
        cli.out.clone(),
        cli.format,
    )?;
    let table = sweep::run_sweep(&run_config);
    let content = match run_config.format {
        config::OutputFormat::Csv => emit::to_csv(&table),
        config::OutputFormat::Json => emit::to_json(&table),
    };
    emit::write_output(&content, run_config.out_path.as_deref())?;
    for row in &table.rows {
        if let Some(message) = &row.error {
            eprintln!("point {} = {:e}: {message}", table.var_column, row.var);
        }
    }
    Ok(table.is_clean())
}
