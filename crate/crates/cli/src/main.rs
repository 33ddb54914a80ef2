//! `boxloss`: benchmark and analysis CLI for the box-regression losses.
//!
//! Subcommands write CSV/JSON data files plus a `manifest.json` recording
//! the resolved configuration, seeds, tool version and output paths;
//! re-running with the manifest's configuration reproduces the data files
//! byte for byte. Plotting is left to external tools.

mod commands;
mod config_file;
mod error;
mod manifest;

use clap::{Args, Parser, Subcommand};
use error::CliError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "boxloss", version, about = "Bounding-box regression loss benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the regression benchmark for one or more loss kinds
    Bench(BenchArgs),
    /// Fit a single anchor box to a target and dump the trajectory
    Converge(ConvergeArgs),
    /// Bin a completed bench run into a spatial error surface
    Surface(SurfaceArgs),
    /// Check analytic gradients against central finite differences
    Gradcheck(GradcheckArgs),
    /// Tune the SIoU shape exponent with a genetic algorithm
    Tune(TuneArgs),
}

/// Options shared by the commands that run simulations.
#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Output directory (created if missing)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Optional `key = value` config file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,

    /// Worker threads (default: machine parallelism; env BOXLOSS_THREADS
    /// is used when the flag is absent)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Loss kind to benchmark; repeat the flag to compare several
    #[arg(long = "loss", value_name = "KIND")]
    losses: Vec<String>,

    /// Anchor points to scatter (the full-scale grid uses 5000)
    #[arg(long)]
    points: Option<usize>,

    /// Point-sampling seed
    #[arg(long)]
    seed: Option<u64>,

    /// SIoU shape exponent
    #[arg(long)]
    theta: Option<f64>,

    /// Optimizer iterations per case
    #[arg(long)]
    iters: Option<usize>,

    /// Reading of the distance-cost y denominator
    #[arg(long, value_name = "enclosing|center-offset")]
    ch_interpretation: Option<String>,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Anchor box as cx,cy,w,h
    #[arg(long)]
    anchor: String,

    /// Target box as cx,cy,w,h
    #[arg(long)]
    target: String,

    /// Loss kind to fit with
    #[arg(long)]
    loss: Option<String>,

    /// Optimizer iterations
    #[arg(long)]
    iters: Option<usize>,

    /// L1 convergence tolerance
    #[arg(long)]
    tol: Option<f64>,

    /// SIoU shape exponent
    #[arg(long)]
    theta: Option<f64>,

    /// Reading of the distance-cost y denominator
    #[arg(long, value_name = "enclosing|center-offset")]
    ch_interpretation: Option<String>,
}

#[derive(Args, Debug)]
struct SurfaceArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Directory holding a completed bench run
    #[arg(long)]
    dir: PathBuf,

    /// Which loss's run record to bin
    #[arg(long)]
    loss: Option<String>,

    /// Grid resolution per axis (at least 2)
    #[arg(long)]
    bins: usize,
}

#[derive(Args, Debug)]
struct GradcheckArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Loss kind to check; repeatable, default: all kinds
    #[arg(long = "loss", value_name = "KIND")]
    losses: Vec<String>,

    /// Box pairs to compare per kind
    #[arg(long)]
    samples: Option<usize>,

    /// Pair-sampling seed
    #[arg(long)]
    seed: Option<u64>,

    /// Central-difference step
    #[arg(long, value_name = "STEP")]
    h: Option<f64>,
}

#[derive(Args, Debug)]
struct TuneArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Anchor points for the fitness simulation
    #[arg(long)]
    points: Option<usize>,

    /// Fitness-simulation seed
    #[arg(long)]
    seed: Option<u64>,

    /// GA seed
    #[arg(long)]
    ga_seed: Option<u64>,

    /// Optimizer iterations per fitness case
    #[arg(long)]
    iters: Option<usize>,

    #[arg(long)]
    population: Option<usize>,

    #[arg(long)]
    generations: Option<usize>,

    /// Gaussian mutation sigma
    #[arg(long)]
    sigma: Option<f64>,

    /// Crossover probability
    #[arg(long)]
    crossover: Option<f64>,

    /// Early-stop fitness threshold
    #[arg(long)]
    threshold: Option<f64>,

    /// Exponent bounds as lo,hi
    #[arg(long, value_name = "LO,HI")]
    theta_bounds: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bench(args) => commands::bench::run(args),
        Command::Converge(args) => commands::converge::run(args),
        Command::Surface(args) => commands::surface::run(args),
        Command::Gradcheck(args) => commands::gradcheck::run(args),
        Command::Tune(args) => commands::tune::run(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
