use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use selfsim_core::report::OutputFormat;

mod commands;

/// Output directory override for `reproduce` and `sweep`.
pub const OUT_ENV: &str = "SELFSIM_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "selfsim",
    version,
    about = "Self-similar solutions of the porous medium equation and their numerical checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolutionArg {
    Neumann,
    Dirichlet,
    Superposed,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PanelArg {
    Left,
    Right,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate a closed-form solution as `xi,theta`.
    Analytic(AnalyticArgs),
    /// Run a reference scenario (left: insulated end, right: prescribed boundary value) and write its outputs.
    Reproduce(ReproduceArgs),
    /// Run the right scenario for several n and write a summary table.
    Sweep(SweepArgs),
    /// Tabulate the superposition residual over a (xi, tau) lattice.
    Residual(ResidualArgs),
}

#[derive(Debug, clap::Args)]
pub struct AnalyticArgs {
    #[arg(long, value_enum)]
    pub solution: SolutionArg,
    #[arg(long)]
    pub n: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi0: f64,
    #[arg(long)]
    pub tau: f64,
    #[arg(long = "tau-shift", default_value_t = 0.0)]
    pub tau_shift: f64,
    #[arg(long = "xi-max")]
    pub xi_max: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct ReproduceArgs {
    #[arg(long, value_enum)]
    pub panel: PanelArg,
    #[arg(long)]
    pub n: Option<f64>,
    #[arg(long)]
    pub gamma0: Option<f64>,
    #[arg(long)]
    pub phi0: Option<f64>,
    /// Domain length.
    #[arg(long = "L")]
    pub length: Option<f64>,
    /// Cell count.
    #[arg(long = "N")]
    pub cells: Option<usize>,
    /// Comma-separated snapshot times.
    #[arg(long = "snap-times", value_delimiter = ',')]
    pub snap_times: Option<Vec<f64>>,
    /// Output directory; falls back to $SELFSIM_OUT, then `selfsim-out`.
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
    #[arg(long, default_value = "both")]
    pub format: OutputFormat,
    /// Record wall time in the report (makes output non-reproducible).
    #[arg(long)]
    pub timestamps: bool,
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    /// Comma-separated nonlinearity values.
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,2.3333333333333335")]
    pub n: Vec<f64>,
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct ResidualArgs {
    #[arg(long)]
    pub n: f64,
    #[arg(long, default_value_t = 0.1)]
    pub gamma0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub phi0: f64,
    #[arg(long = "tau-shift", default_value_t = 0.0)]
    pub tau_shift: f64,
    #[arg(long = "xi-max", default_value_t = 4.0)]
    pub xi_max: f64,
    #[arg(long = "xi-samples", default_value_t = 9)]
    pub xi_samples: usize,
    /// Comma-separated evaluation times.
    #[arg(long, value_delimiter = ',', default_value = "1,3,9,27,81")]
    pub tau: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analytic(a) => commands::analytic(&a),
        Command::Reproduce(a) => commands::reproduce(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Residual(a) => commands::residual(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
