use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use risbt_cli::config::{parse_config, FileConfig};
use risbt_cli::demo::{demo_default_config, run_decode_demo};
use risbt_cli::experiment::{
    predict_csv, rows_to_csv, run_ba_probability, run_rate_curve, ExperimentSpec,
};

/// Link-level simulator for beam training in RIS-assisted mmWave systems.
#[derive(Parser)]
#[command(name = "risbt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment configuration file (flat key=value; defaults when omitted)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; every random stream derives from it
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Override the configured trial count
    #[arg(long)]
    trials: Option<u64>,
    /// Worker threads (0 = one per core); the output does not depend on it
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Disable receiver noise
    #[arg(long)]
    noiseless: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Perfect beam-alignment probability over Monte Carlo trials
    BaProb {
        #[command(flatten)]
        run: RunArgs,
        /// Skip channel matrices: ideal bin identification, binning and
        /// decoding only (noiseless on-grid regime, multidirectional only)
        #[arg(long)]
        combinatorial: bool,
    },
    /// Average achievable rate versus SNR
    RateCurve {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Closed-form overhead and success prediction
    Predict {
        #[command(flatten)]
        common: CommonArgs,
        /// Success probability the round solver must reach
        #[arg(long, default_value_t = 0.99)]
        target: f64,
    },
    /// Noiseless walkthrough of one multi-directional decode on the toy cube
    DecodeDemo {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn load_config(path: &Option<PathBuf>, fallback: FileConfig) -> Result<FileConfig> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            parse_config(&text)
        }
        None => Ok(fallback),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::BaProb { run, combinatorial } => {
            let mut file = load_config(&run.common.config, FileConfig::default())?;
            if let Some(t) = run.trials {
                file.trials = t;
            }
            let mut spec = ExperimentSpec::new(file, run.common.seed);
            spec.workers = run.workers;
            spec.noiseless = run.noiseless;
            spec.combinatorial = combinatorial;
            let rows = run_ba_probability(&spec)?;
            emit(&run.common.out, &rows_to_csv(&rows))
        }
        Command::RateCurve { run } => {
            let mut file = load_config(&run.common.config, FileConfig::default())?;
            if let Some(t) = run.trials {
                file.trials = t;
            }
            let mut spec = ExperimentSpec::new(file, run.common.seed);
            spec.workers = run.workers;
            spec.noiseless = run.noiseless;
            let rows = run_rate_curve(&spec)?;
            emit(&run.common.out, &rows_to_csv(&rows))
        }
        Command::Predict { common, target } => {
            let file = load_config(&common.config, FileConfig::default())?;
            let spec = ExperimentSpec::new(file, common.seed);
            let csv = predict_csv(&spec, target)?;
            emit(&common.out, &csv)
        }
        Command::DecodeDemo { common } => {
            let file = load_config(&common.config, demo_default_config())?;
            let spec = ExperimentSpec::new(file, common.seed);
            let trace = run_decode_demo(&spec)?;
            emit(&common.out, &trace)
        }
    }
}
