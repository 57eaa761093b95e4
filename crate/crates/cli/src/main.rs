mod artifacts;
mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lfn_core::LfnError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "lfn", version, about = "Unemployment on labor flow networks")]
struct Cli {
    /// Cap on worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a network and write it as an edge list.
    Generate(GenerateArgs),
    /// Steady state (exogenous wage) or equilibrium (endogenous wages) on a network.
    Solve(SolveArgs),
    /// Agent-level Monte Carlo of the search process.
    Simulate(SimulateArgs),
    /// Equilibrium unemployment over a range of vacancy costs.
    Sweep(SweepArgs),
    /// Estimate the separation rate from a firm panel and fit the investment probability.
    Calibrate(CalibrateArgs),
    /// Compare unemployment on a network with its regular counterpart.
    Counterfactual(CounterfactualArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exogenous,
    Endogenous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyArg {
    Regular,
    Binomial,
    Pareto,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RootArg {
    Highest,
    Lowest,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Fixed-point tolerance (sup norm).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub topology: TopologyArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub mean_degree: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub edges: PathBuf,
    /// JSON parameter file; the stylized calibration if omitted.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Endogenous)]
    pub mode: Mode,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// How hiring policies are set before simulating.
    #[arg(long, value_enum, default_value_t = Mode::Endogenous)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub periods: usize,
    /// Discarded initial periods; 10% of `--periods` if omitted.
    #[arg(long)]
    pub burnin: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub batch_len: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep a given network instead of generated ones.
    #[arg(long, conflicts_with_all = ["topology", "n", "mean_degree", "seeds"])]
    pub edges: Option<PathBuf>,
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TopologyArg::All)]
    pub topology: TopologyArg,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 6.0)]
    pub mean_degree: f64,
    /// Generator seed when sweeping a single generated network.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated generator seeds; overrides `--seed`.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[arg(long, default_value_t = 0.1)]
    pub c_min: f64,
    #[arg(long, default_value_t = 0.9)]
    pub c_max: f64,
    #[arg(long, default_value_t = 9)]
    pub c_steps: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Firm panel CSV with header `firm,L,O`.
    #[arg(long)]
    pub panel: PathBuf,
    #[arg(long)]
    pub edges: PathBuf,
    /// Parameters other than the separation rate and `v`, which are estimated.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub target_u: f64,
    /// Run the model on the daily conversion of the estimated annual rate.
    #[arg(long)]
    pub daily: bool,
    /// Which `v` to report if several reach the target.
    #[arg(long, value_enum, default_value_t = RootArg::Highest)]
    pub root: RootArg,
    /// Tolerance on |u(v) − target|.
    #[arg(long, default_value_t = 1e-8)]
    pub fit_tol: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CounterfactualArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
}

fn exit_code(err: &LfnError) -> u8 {
    if err.is_numerical() {
        3
    } else if matches!(err, LfnError::Io(_)) {
        4
    } else {
        2
    }
}

fn report(kind: &str, message: &str, code: u8) -> ExitCode {
    let body = serde_json::json!({ "error": kind, "message": message, "exit_code": code });
    eprintln!("{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return report("Usage", e.to_string().trim_end(), 2),
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            return report("Usage", &e.to_string(), 2);
        }
    }
    let result = match &cli.command {
        Command::Generate(a) => commands::generate(a, cli.threads),
        Command::Solve(a) => commands::solve(a, cli.threads),
        Command::Simulate(a) => commands::simulate(a, cli.threads),
        Command::Sweep(a) => commands::sweep(a, cli.threads),
        Command::Calibrate(a) => commands::calibrate(a, cli.threads),
        Command::Counterfactual(a) => commands::counterfactual(a, cli.threads),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(e.kind(), &e.to_string(), exit_code(&e)),
    }
}
