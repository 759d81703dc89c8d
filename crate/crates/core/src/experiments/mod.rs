//! Declarative experiments: a JSON config in, a deterministic report out.
//!
//! Every trial draws from its own stream, identified by the master seed, the
//! grid slot and the trial index, and results are merged in trial order, so
//! a report does not depend on the number of workers.

mod config;
mod coupling;
mod details;
mod poisson;
mod report;
mod runner;
mod scaling;
mod wide;

pub use config::{Constants, ExperimentConfig, ExperimentKind, Functional, Model};
pub use coupling::coupled_size;
pub use details::*;
pub use report::{fmt_f64, NRow, NamedFit, RawTable, Report};

use crate::Result;

/// Default worker count: the available parallelism.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Validates `config` and runs its experiment with `workers` threads.
pub fn run(config: &ExperimentConfig, workers: usize) -> Result<Report> {
    config.validate()?;
    let mut ctx = runner::Ctx::new(config, workers)?;
    let (rows, fits, details) = match config.experiment {
        ExperimentKind::Clt => scaling::run_clt(&mut ctx)?,
        ExperimentKind::VarianceScaling => scaling::run_variance_scaling(&mut ctx)?,
        ExperimentKind::Expectation => scaling::run_expectation(&mut ctx)?,
        ExperimentKind::Tail => scaling::run_tail(&mut ctx)?,
        ExperimentKind::Coupling => coupling::run_coupling(&mut ctx)?,
        ExperimentKind::PoissonVsUniform => poisson::run_poisson_vs_uniform(&mut ctx)?,
        ExperimentKind::FloatingAndWide => wide::run_floating_and_wide(&mut ctx)?,
    };
    Ok(Report {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        experiment: config.experiment,
        config: config.echo(),
        failed_trials: ctx.failures.count,
        errors: ctx.failures.messages,
        rows,
        fits,
        details,
        raw: ctx.raw,
    })
}

/// `(name, description)` of every experiment.
pub fn list_experiments() -> Vec<(&'static str, &'static str)> {
    ExperimentKind::ALL
        .iter()
        .map(|k| (k.name(), k.description()))
        .collect()
}
