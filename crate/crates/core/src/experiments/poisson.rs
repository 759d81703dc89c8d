//! Paired Poisson and uniform models at equal `n`.

use super::config::Functional;
use super::details::{Details, PoissonDetails, PoissonRow};
use super::report::{NRow, NamedFit};
use super::runner::{functional_value, summarize, trial_stream, Ctx, TAG_BOOTSTRAP};
use super::scaling::Outcome;
use crate::hull::Hull;
use crate::sampling::{sample_points, sample_poisson_model};
use crate::stats::{bootstrap_ci, fit_power_law, ks_critical_value, ks_distance_to_normal, ks_two_sample};
use crate::Result;

fn mean_of(idx: &[usize], v: &[f64]) -> f64 {
    idx.iter().map(|&i| v[i]).sum::<f64>() / idx.len() as f64
}

fn var_of(idx: &[usize], v: &[f64]) -> f64 {
    let m = mean_of(idx, v);
    idx.iter().map(|&i| (v[i] - m).powi(2)).sum::<f64>() / idx.len() as f64
}

/// Both models draw their points from the same trial stream (the Poisson
/// size comes from a substream), so the two samples share a prefix and the
/// pair is strongly coupled.
pub(crate) fn run_poisson_vs_uniform(ctx: &mut Ctx) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let functional = cfg.functional;
    let k = &cfg.constants;
    ctx.set_raw_columns(&["uniform", "poisson"]);
    let mut rows = Vec::new();
    let mut per_n = Vec::new();
    for (slot, &n) in cfg.n_grid.iter().enumerate() {
        let body = ctx.body.clone();
        let seed = cfg.master_seed;
        let res = ctx.run_trials(n, |t| {
            let pts = sample_points(&body, n, &mut trial_stream(seed, slot, t));
            let u = functional_value(&Hull::build(&pts)?, functional)?;
            let pp = sample_poisson_model(&body, n as f64, &mut trial_stream(seed, slot, t))?;
            let p = functional_value(&Hull::build(&pp)?, functional)?;
            Ok((u, p))
        });
        let (mut uni, mut poi) = (Vec::new(), Vec::new());
        for (t, (u, p)) in res {
            ctx.push_raw(n, t, vec![u, p]);
            uni.push(u);
            poi.push(p);
        }
        let (su, sp) = (summarize(n, &uni)?, summarize(n, &poi)?);
        let row_u = NRow::new(n, &su, ks_distance_to_normal(&uni).ok());
        let row_p = NRow::new(n, &sp, ks_distance_to_normal(&poi).ok());
        // Expectation ratio of the missed volume for the volume, of the
        // functional itself otherwise.
        let level: Vec<f64> = match functional {
            Functional::Volume => uni.iter().map(|v| 1.0 - v).collect(),
            _ => uni.clone(),
        };
        let level_p: Vec<f64> = match functional {
            Functional::Volume => poi.iter().map(|v| 1.0 - v).collect(),
            _ => poi.clone(),
        };
        let all: Vec<usize> = (0..uni.len()).collect();
        let mean_ratio = mean_of(&all, &level_p) / mean_of(&all, &level);
        let variance_ratio = var_of(&all, &poi) / var_of(&all, &uni);
        let mut rng = ctx.aux_stream(slot, TAG_BOOTSTRAP);
        let mean_ratio_ci = bootstrap_ci(uni.len(), k.bootstrap_resamples, k.confidence, &mut rng, |idx| {
            mean_of(idx, &level_p) / mean_of(idx, &level)
        })?;
        let variance_ratio_ci = bootstrap_ci(uni.len(), k.bootstrap_resamples, k.confidence, &mut rng, |idx| {
            var_of(idx, &poi) / var_of(idx, &uni)
        })?;
        per_n.push(PoissonRow {
            n,
            trials: uni.len(),
            uniform: row_u.clone(),
            poisson: row_p,
            mean_ratio,
            mean_ratio_ci,
            variance_ratio,
            variance_ratio_ci,
            ks_two_sample: ks_two_sample(&uni, &poi)?,
            ks_critical_05: ks_critical_value(uni.len(), poi.len(), 0.05),
        });
        rows.push(row_u);
    }
    let ks: Vec<f64> = per_n.iter().map(|r| r.ks_two_sample).collect();
    let mut fits = Vec::new();
    let d = ctx.dim() as f64;
    for (name, dev) in [
        ("mean_ratio_deviation", per_n.iter().map(|r| (r.mean_ratio - 1.0).abs()).collect::<Vec<_>>()),
        ("variance_ratio_deviation", per_n.iter().map(|r| (r.variance_ratio - 1.0).abs()).collect()),
    ] {
        let pairs: Vec<(f64, f64)> = per_n.iter().zip(&dev).map(|(r, v)| (r.n as f64, *v)).collect();
        if pairs.iter().all(|p| p.1 > 0.0) {
            if let Ok(f) = fit_power_law(&pairs) {
                fits.push(NamedFit::new(name, &f, Some(-1.0 / (d + 1.0))));
            }
        }
    }
    Ok((
        rows,
        fits,
        Details::PoissonVsUniform(PoissonDetails {
            confidence: k.confidence,
            per_n,
            ks_strictly_decreasing: ks.windows(2).all(|w| w[1] < w[0]),
        }),
    ))
}
