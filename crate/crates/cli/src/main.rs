//! `swdl`: grids, uncertainty bounds, optimal matrices and LFM rate detection
//! from a TOML run configuration.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::MethodTag;
use error::CliError;
use output::Output;

#[derive(Parser)]
#[command(name = "swdl", version, about = "Symplectic Wigner distribution in the LCT domain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in configuration the file and overrides apply on top of.
    #[arg(long, value_parser = ["fig1"])]
    preset: Option<String>,
    /// Override a configuration key, e.g. `--set grid.points=101`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum)]
    method: Option<MethodTag>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the SWDL grid as CSV and PGM.
    Tfd(RunArgs),
    /// Moment report and uncertainty bound for the configured signal class.
    Bounds(RunArgs),
    /// Print the optimal first matrix and, with `--beta`, the LFM second matrix.
    Optimize {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        b2: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        d2: f64,
    },
    /// Radon transform of |W| and the rate-amplitude distribution.
    Detect(RunArgs),
    /// SWDL, SWD, WDL and WD on the same LFM with rate distributions.
    Experiment(RunArgs),
}

fn run_with(args: &RunArgs, name: &str, f: fn(&config::RunConfig, &mut Output) -> Result<(), CliError>) -> Result<(), CliError> {
    let mut cfg = config::load(args.preset.as_deref(), args.config.as_deref(), &args.sets)?;
    if let Some(m) = args.method {
        cfg.run.method = m;
    }
    let mut out = Output::create(&args.out)?;
    let result = f(&cfg, &mut out);
    out.finish(name, &cfg)?;
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Tfd(a) => run_with(a, "tfd", commands::tfd),
        Command::Bounds(a) => run_with(a, "bounds", commands::bounds),
        Command::Detect(a) => run_with(a, "detect", commands::detect),
        Command::Experiment(a) => run_with(a, "experiment", commands::experiment),
        Command::Optimize { a, b, beta, b2, d2 } => commands::optimize(*a, *b, *beta, *b2, *d2),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
