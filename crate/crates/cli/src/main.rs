mod cmd;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

use error::CliError;

#[derive(Parser)]
#[command(name = "fundnet", version, about = "Investment-fund cross-holdings: synthetic markets, network metrics, cascades and sweeps")]
struct Cli {
    /// More log output on stderr (repeatable).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    verbose: u8,
    /// Only warnings and errors on stderr.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output directory, created if absent.
    #[arg(long, env = "FUNDNET_OUT_DIR", default_value = "fundnet-out")]
    pub out: PathBuf,
    /// Write into a non-empty output directory.
    #[arg(long)]
    pub force: bool,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Snapshot directory, or a bundle root holding one directory per date.
    pub input: PathBuf,
    /// Date to use from a multi-date bundle (default: the last one).
    #[arg(long)]
    pub date: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ScenarioArgs {
    /// Comma-separated asset ids to shock (default: the dominant non-cash asset).
    #[arg(long = "shock-assets", value_delimiter = ',')]
    pub shock_assets: Vec<String>,
    /// Starting values for the rates.
    #[arg(long, value_parser = ["text", "figure"], default_value = "text")]
    pub preset: String,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Linear solver: auto, dense-lu or fixed-point.
    #[arg(long, default_value = "auto")]
    pub solver: String,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded synthetic market as a CSV bundle.
    Generate(cmd::generate::GenerateArgs),
    /// Centrality, degree histograms, densities, assortativity and stability.
    Metrics(cmd::metrics::MetricsArgs),
    /// Run one shock scenario to its new equilibrium.
    Simulate(cmd::simulate::SimulateArgs),
    /// Run a parameter grid of scenarios.
    Sweep(cmd::sweep::SweepArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match (cli.quiet, cli.verbose) {
        (true, _) => log::LevelFilter::Warn,
        (false, 0) => log::LevelFilter::Info,
        (false, 1) => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_env("FUNDNET_LOG")
        .format_timestamp(None)
        .init();
    let result = match cli.command {
        Command::Generate(a) => cmd::generate::run(a),
        Command::Metrics(a) => cmd::metrics::run(a),
        Command::Simulate(a) => cmd::simulate::run(a),
        Command::Sweep(a) => cmd::sweep::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fundnet: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;
