use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tumorwave::{NutrientModel, SolverKind};
use tumorwave_cli::commands::{self, Options};
use tumorwave_cli::config::RunConfig;
use tumorwave_cli::error::CliError;

/// Traveling waves of a tumor growth model: closed-form and general wave
/// solves, 1D simulations, and a cross-check between the two.
#[derive(Debug, Parser)]
#[command(name = "tumorwave", version)]
struct Cli {
    /// TOML run configuration; every field has a default.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Nutrient model, overriding `params.model`.
    #[arg(long, global = true, value_enum)]
    model: Option<ModelArg>,
    /// Force a wave solver instead of picking one from the laws.
    #[arg(long, global = true, value_enum)]
    solver: Option<SolverArg>,
    /// Output directory.
    #[arg(long, global = true, default_value = "tumorwave-out")]
    out: PathBuf,
    /// Only errors on stderr; nothing on stdout.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for the traveling wave and write its summary and profile.
    Wave,
    /// Run the 1D simulation and write snapshots and the front trace.
    Simulate,
    /// Compare the simulated front speed with the closed-form speed.
    Validate,
    /// Solve waves over the `c_B` x `c_bar` grid of the `[sweep]` section.
    Sweep,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Vitro,
    Vivo,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolverArg {
    Analytic,
    General,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    commands::apply_model(
        &mut cfg,
        cli.model.map(|m| match m {
            ModelArg::Vitro => NutrientModel::InVitro,
            ModelArg::Vivo => NutrientModel::InVivo,
        }),
    );
    let opts = Options {
        out: cli.out,
        quiet: cli.quiet,
        solver: cli.solver.map(|s| match s {
            SolverArg::Analytic => SolverKind::Analytic,
            SolverArg::General => SolverKind::General,
        }),
    };
    match cli.command {
        Command::Wave => commands::cmd_wave(&cfg, &opts).map(drop),
        Command::Simulate => commands::cmd_simulate(&cfg, &opts).map(drop),
        Command::Validate => commands::cmd_validate(&cfg, &opts).map(drop),
        Command::Sweep => commands::cmd_sweep(&cfg, &opts).map(drop),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tumorwave: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
