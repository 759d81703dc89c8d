//! Command-line runner for the experiments.
//!
//! Exit codes: 0 success, 2 configuration error, 3 runtime or data error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rpoly::experiments::{self, ExperimentConfig};
use rpoly::Error;

#[derive(Parser)]
#[command(name = "rpoly", version, about = "Monte Carlo experiments on random polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Output directory (default: the config's `output`, else `rpoly-out`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: the config's `workers`, else all cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Also write per-trial values to raw.csv.
        #[arg(long)]
        raw: bool,
    },
    /// List the available experiments.
    ListExperiments,
    /// Check a config without running it.
    Validate { config: PathBuf },
}

fn exit_code(e: &Error) -> ExitCode {
    match e {
        Error::Config(_) => ExitCode::from(2),
        _ => ExitCode::from(3),
    }
}

fn run(config: PathBuf, out: Option<PathBuf>, workers: Option<usize>, raw: bool) -> Result<(), Error> {
    let mut cfg = ExperimentConfig::from_file(&config)?;
    cfg.raw |= raw;
    let workers = workers.or(cfg.workers).unwrap_or_else(experiments::default_workers);
    if workers == 0 {
        return Err(Error::Config("--workers must be at least 1".into()));
    }
    let dir = out
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("rpoly-out"));
    let start = Instant::now();
    let report = experiments::run(&cfg, workers)?;
    report.write_to(&dir, cfg.raw)?;
    // Timing and worker count stay out of report.json so that it is
    // identical across worker counts.
    let runtime = serde_json::json!({
        "workers": workers,
        "elapsed_seconds": start.elapsed().as_secs_f64(),
    });
    std::fs::write(dir.join("runtime.json"), serde_json::to_vec_pretty(&runtime)?)?;
    eprintln!(
        "{}: {} grid points, {} failed trials, written to {}",
        report.experiment,
        report.rows.len(),
        report.failed_trials,
        dir.display()
    );
    if report.failed_trials > 0 {
        return Err(Error::Data(format!(
            "{} trials failed; first: {}",
            report.failed_trials,
            report.errors.first().map(String::as_str).unwrap_or("")
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out,
            workers,
            raw,
        } => run(config, out, workers, raw),
        Command::ListExperiments => {
            for (name, about) in experiments::list_experiments() {
                println!("{name:<20} {about}");
            }
            Ok(())
        }
        Command::Validate { config } => ExperimentConfig::from_file(&config).map(|cfg| {
            println!("ok: {} on {:?} in dimension {}", cfg.experiment, cfg.body, cfg.dim);
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
