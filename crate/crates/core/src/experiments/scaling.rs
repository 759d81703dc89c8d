//! Experiments on the distribution of one hull functional per trial:
//! normal approximation, variance and mean exponents, tails.

use rand_distr::{Distribution, StandardNormal};

use super::config::{Functional, Model};
use super::details::{
    CltDetails, Details, EfronRow, ExpectationDetails, TailDetails, TailRow, VarianceDetails,
};
use super::report::{NRow, NamedFit};
use super::runner::{
    functional_value, mean_exponent, sample, summarize, trial_stream, variance_exponent, Ctx, TAG_CONTROL,
};
use crate::functionals::Estimate;
use crate::hull::Hull;
use crate::stats::{fit_power_law, fit_tail_rate, ks_distance_to_normal, tail_profile, Summary};
use crate::{Error, Result};

pub(crate) type Outcome = (Vec<NRow>, Vec<NamedFit>, Details);

/// Functional values of `trials` independent hulls at each `n`.
fn values_per_n(ctx: &mut Ctx) -> Result<Vec<(usize, Vec<f64>)>> {
    let cfg = ctx.cfg;
    let model = cfg.effective_model();
    let functional = cfg.functional;
    ctx.set_raw_columns(&[&functional.to_string()]);
    let mut out = Vec::new();
    for (slot, &n) in cfg.n_grid.iter().enumerate() {
        let body = ctx.body.clone();
        let seed = cfg.master_seed;
        let res = ctx.run_trials(n, |t| {
            let mut rng = trial_stream(seed, slot, t);
            let pts = sample(&body, n, model, &mut rng)?;
            functional_value(&Hull::build(&pts)?, functional)
        });
        let mut vals = Vec::with_capacity(res.len());
        for (t, v) in res {
            ctx.push_raw(n, t, vec![v]);
            vals.push(v);
        }
        out.push((n, vals));
    }
    Ok(out)
}

fn power_fit(name: &str, pairs: &[(f64, f64)], expected: Option<f64>) -> Option<NamedFit> {
    if pairs.len() < 2 || pairs.iter().any(|(_, v)| !(*v > 0.0)) {
        return None;
    }
    fit_power_law(pairs)
        .ok()
        .map(|f| NamedFit::new(name, &f, expected))
}

pub(crate) fn run_clt(ctx: &mut Ctx) -> Result<Outcome> {
    let per_n = values_per_n(ctx)?;
    let mut rows = Vec::new();
    for (n, vals) in &per_n {
        let s = summarize(*n, vals)?;
        let ks = ks_distance_to_normal(vals)?;
        rows.push(NRow::new(*n, &s, Some(ks)));
    }
    let ks: Vec<f64> = rows.iter().map(|r| r.ks.unwrap_or(f64::NAN)).collect();
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.ks.unwrap_or(0.0))).collect();
    let d = ctx.dim() as f64;
    let fits = power_fit("ks", &pairs, Some(-1.0 / (d + 1.0)))
        .into_iter()
        .collect();
    let details = CltDetails {
        ks_strictly_decreasing: ks.windows(2).all(|w| w[1] < w[0]),
        ks_reference_critical: rows
            .iter()
            .map(|r| 1.358 / (r.trials as f64).sqrt())
            .collect(),
    };
    Ok((rows, fits, Details::Clt(details)))
}

pub(crate) fn run_variance_scaling(ctx: &mut Ctx) -> Result<Outcome> {
    let per_n = values_per_n(ctx)?;
    let mut rows = Vec::new();
    for (n, vals) in &per_n {
        let s = summarize(*n, vals)?;
        let ks = ks_distance_to_normal(vals).ok();
        rows.push(NRow::new(*n, &s, ks));
    }
    let expected = variance_exponent(ctx.dim(), ctx.cfg.functional);
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.var)).collect();
    let fits = power_fit("variance", &pairs, Some(expected))
        .into_iter()
        .collect();
    Ok((
        rows,
        fits,
        Details::VarianceScaling(VarianceDetails {
            expected_slope: expected,
        }),
    ))
}

fn estimate(s: &Summary) -> Estimate {
    Estimate {
        mean: s.mean,
        stderr: s.mean_stderr,
        samples: s.count,
    }
}

/// Per trial: the functional of `K_n` (the missed volume for the volume)
/// and, for the uniform model, `(f_0(K_n), 1 - Vol(K_{n-1}))` from the same
/// points.
pub(crate) fn run_expectation(ctx: &mut Ctx) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let model = cfg.effective_model();
    let functional = cfg.functional;
    let efron = model == Model::Uniform;
    let quantity = match functional {
        Functional::Volume => "missed_volume".to_string(),
        f => f.to_string(),
    };
    if efron {
        ctx.set_raw_columns(&[&quantity, "f0", "missed_volume_prev"]);
    } else {
        ctx.set_raw_columns(&[&quantity]);
    }
    let mut rows = Vec::new();
    let mut efron_rows = Vec::new();
    for (slot, &n) in cfg.n_grid.iter().enumerate() {
        let body = ctx.body.clone();
        let seed = cfg.master_seed;
        let res = ctx.run_trials(n, |t| {
            let mut rng = trial_stream(seed, slot, t);
            let pts = sample(&body, n, model, &mut rng)?;
            let value = |h: &Hull| -> Result<f64> {
                Ok(match functional {
                    Functional::Volume => 1.0 - h.volume(),
                    f => functional_value(h, f)?,
                })
            };
            if !efron {
                return Ok((value(&Hull::build(&pts)?)?, None));
            }
            let mut hull = Hull::build(&pts[..n - 1])?;
            let missed_prev = 1.0 - hull.volume();
            hull.add_point(&pts[n - 1]);
            Ok((value(&hull)?, Some((hull.vertex_count() as f64, missed_prev))))
        });
        let mut vals = Vec::with_capacity(res.len());
        let mut pairs = Vec::with_capacity(res.len());
        for (t, (v, e)) in res {
            vals.push(v);
            match e {
                Some((f0, mp)) => {
                    ctx.push_raw(n, t, vec![v, f0, mp]);
                    pairs.push((f0, mp));
                }
                None => ctx.push_raw(n, t, vec![v]),
            }
        }
        let s = summarize(n, &vals)?;
        rows.push(NRow::new(n, &s, ks_distance_to_normal(&vals).ok()));
        if efron && pairs.len() >= 2 {
            let nf = n as f64;
            let f0: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let ef: Vec<f64> = pairs.iter().map(|p| nf * p.1).collect();
            let diff: Vec<f64> = pairs.iter().map(|p| p.0 - nf * p.1).collect();
            let (sf, se, sd) = (Summary::of(&f0)?, Summary::of(&ef)?, Summary::of(&diff)?);
            let z = if sd.mean_stderr > 0.0 {
                sd.mean / sd.mean_stderr
            } else {
                0.0
            };
            efron_rows.push(EfronRow {
                n,
                trials: pairs.len(),
                f0: estimate(&sf),
                efron: estimate(&se),
                difference: estimate(&sd),
                z,
                within_three_stderr: z.abs() <= 3.0,
            });
        }
    }
    let expected = mean_exponent(ctx.dim(), functional);
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.mean)).collect();
    let fits = power_fit("mean", &pairs, Some(expected)).into_iter().collect();
    Ok((
        rows,
        fits,
        Details::Expectation(ExpectationDetails {
            quantity,
            expected_slope: expected,
            efron: efron_rows,
        }),
    ))
}

pub(crate) fn run_tail(ctx: &mut Ctx) -> Result<Outcome> {
    let per_n = values_per_n(ctx)?;
    let grid = ctx.cfg.lambda_grid();
    let min_lambda = ctx.cfg.constants.tail_min_lambda;
    let mut rows = Vec::new();
    let mut tail_rows = Vec::new();
    for (slot, (n, vals)) in per_n.iter().enumerate() {
        let s = summarize(*n, vals)?;
        rows.push(NRow::new(*n, &s, ks_distance_to_normal(vals).ok()));
        if !(s.variance > 0.0) {
            return Err(Error::data(format!("zero variance at n = {n}; no tail profile")));
        }
        let profile = tail_profile(vals, s.variance, &grid)?;
        let rate = fit_tail_rate(&profile, min_lambda).ok();
        let mut rng = ctx.aux_stream(slot, TAG_CONTROL);
        let control: Vec<f64> = (0..vals.len()).map(|_| StandardNormal.sample(&mut rng)).collect();
        let cvar = Summary::of(&control)?.variance;
        let control_profile = tail_profile(&control, cvar, &grid)?;
        let control_rate = fit_tail_rate(&control_profile, min_lambda).ok();
        let bound_holds = rate.map(|r| {
            profile
                .iter()
                .all(|p| p.exceedance <= 2.0 * (-r.c * p.lambda).exp())
        });
        tail_rows.push(TailRow {
            n: *n,
            profile,
            rate,
            control_profile,
            control_rate,
            bound_holds,
        });
    }
    Ok((
        rows,
        Vec::new(),
        Details::Tail(TailDetails {
            min_lambda,
            per_n: tail_rows,
        }),
    ))
}
