//! `rtip`: run rate-induced tipping experiments from a JSON configuration and
//! write CSV artifacts plus a hashed manifest.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use commands::Subcommand;
use config::ExperimentConfig;
use error::{CliError, CliResult};
use output::OutputDir;

#[derive(Debug, Parser)]
#[command(name = "rtip", version, about = "Rate-induced tipping thresholds and early-warning skill")]
struct Args {
    /// Experiment to run.
    #[arg(value_enum)]
    command: Subcommand,

    /// JSON configuration; defaults are used for absent keys.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory [default: output_dir from the config, else ./out].
    #[arg(long)]
    out: Option<PathBuf>,

    /// Base seed, overriding the config.
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads.
    #[arg(long, env = "RTIP_THREADS")]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: Args) -> CliResult<()> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.base_seed = seed;
    }
    cfg.validate()?;
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Config("threads: must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    }
    let dir = args.out.clone().or_else(|| cfg.output_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let mut out = OutputDir::create(&dir)?;
    commands::run(args.command, &cfg, &mut out)?;
    out.finish(args.command.name(), cfg.base_seed, &cfg)
}
