//! Trial fan-out and per-trial hull functionals shared by the experiments.

use rayon::prelude::*;

use super::config::{ExperimentConfig, Functional, Model};
use super::report::RawTable;
use crate::geometry::{Body, Point};
use crate::hull::Hull;
use crate::sampling::{sample_points, sample_poisson_model, RngStream};
use crate::stats::Summary;
use crate::{Error, Result};

/// Substream tags.
pub(crate) const TAG_PROBES: u64 = 1;
pub(crate) const TAG_WIDE: u64 = 2;
pub(crate) const TAG_CONTROL: u64 = 3;
pub(crate) const TAG_BOOTSTRAP: u64 = 4;
pub(crate) const TAG_G: u64 = 5;
pub(crate) const TAG_WET: u64 = 6;
pub(crate) const TAG_COVER: u64 = 7;

/// Trial streams use ids below `2^39` within each grid slot; auxiliary
/// streams sit above.
const AUX_BIT: u64 = 1 << 39;

/// The stream of trial `trial` at grid slot `slot`.
pub(crate) fn trial_stream(master_seed: u64, slot: usize, trial: usize) -> RngStream {
    RngStream::new(master_seed, ((slot as u64) << 40) | trial as u64)
}

pub(crate) struct Ctx<'a> {
    pub cfg: &'a ExperimentConfig,
    pub body: Body,
    pool: rayon::ThreadPool,
    pub failures: Failures,
    pub raw: RawTable,
}

#[derive(Debug, Default)]
pub(crate) struct Failures {
    pub count: usize,
    pub messages: Vec<String>,
}

const MAX_MESSAGES: usize = 10;

impl<'a> Ctx<'a> {
    pub fn new(cfg: &'a ExperimentConfig, workers: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| Error::data(format!("cannot start worker pool: {e}")))?;
        Ok(Ctx {
            cfg,
            body: cfg.body()?,
            pool,
            failures: Failures::default(),
            raw: RawTable::default(),
        })
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }


    /// A stream for per-n work outside the trials.
    pub fn aux_stream(&self, slot: usize, tag: u64) -> RngStream {
        RngStream::new(self.cfg.master_seed, ((slot as u64) << 40) | AUX_BIT | tag)
    }

    /// Runs `trials` independent trials on the pool. Results come back in
    /// trial order, so the outcome does not depend on the worker count.
    /// Failed trials are dropped and counted.
    pub fn run_trials<T: Send>(
        &mut self,
        n: usize,
        f: impl Fn(usize) -> Result<T> + Sync + Send,
    ) -> Vec<(usize, T)> {
        let trials = self.cfg.trials;
        let out: Vec<Result<T>> = self
            .pool
            .install(|| (0..trials).into_par_iter().map(&f).collect());
        let mut ok = Vec::with_capacity(trials);
        for (t, r) in out.into_iter().enumerate() {
            match r {
                Ok(v) => ok.push((t, v)),
                Err(e) => {
                    self.failures.count += 1;
                    if self.failures.messages.len() < MAX_MESSAGES {
                        self.failures.messages.push(format!("n = {n}, trial {t}: {e}"));
                    }
                }
            }
        }
        ok
    }

    pub fn set_raw_columns(&mut self, cols: &[&str]) {
        self.raw.columns = cols.iter().map(|s| s.to_string()).collect();
    }

    pub fn push_raw(&mut self, n: usize, trial: usize, values: Vec<f64>) {
        if self.cfg.raw {
            self.raw.rows.push((n, trial, values));
        }
    }
}

/// A sample of the configured model with nominal size `n`.
pub(crate) fn sample(body: &Body, n: usize, model: Model, rng: &mut RngStream) -> Result<Vec<Point>> {
    match model {
        Model::Uniform | Model::Coupled => Ok(sample_points(body, n, rng)),
        Model::Poisson => sample_poisson_model(body, n as f64, rng),
    }
}

pub(crate) fn functional_value(hull: &Hull, functional: Functional) -> Result<f64> {
    match functional {
        Functional::Volume => Ok(hull.volume()),
        Functional::Faces(i) => Ok(hull.face_count(i)? as f64),
    }
}

/// Summary of a sample, mapping "too few values" to a data error that
/// names the grid point.
pub(crate) fn summarize(n: usize, values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::data(format!("no successful trials at n = {n}")));
    }
    Summary::of(values)
}

/// `(d+3)/(d+1)` and `(d-1)/(d+1)` style exponents of the functional.
pub(crate) fn variance_exponent(d: usize, functional: Functional) -> f64 {
    let d = d as f64;
    match functional {
        Functional::Volume => -(d + 3.0) / (d + 1.0),
        Functional::Faces(_) => (d - 1.0) / (d + 1.0),
    }
}

pub(crate) fn mean_exponent(d: usize, functional: Functional) -> f64 {
    let d = d as f64;
    match functional {
        Functional::Volume => -2.0 / (d + 1.0),
        Functional::Faces(_) => (d - 1.0) / (d + 1.0),
    }
}
