//! Coupled samples `P` and `P' = P + Q`: differences of the functionals,
//! the variance shift, typicality and per-insertion face statistics.

use std::collections::BTreeMap;

use super::details::{
    CouplingDetails, CouplingRow, DiffStats, Details, FaceRatio, HistBin, InsertionStats, Typicality,
};
use super::report::{NRow, NamedFit};
use super::runner::{summarize, trial_stream, Ctx, TAG_G, TAG_WET};
use super::scaling::Outcome;
use crate::functionals::{epsilon_star, g_epsilon, wet_part_volume, Estimate};
use crate::geometry::Body;
use crate::hull::Hull;
use crate::sampling::coupled_pair;
use crate::stats::{fit_line, fit_power_law, Summary};
use crate::Result;

/// `n' = n + ceil(A sqrt(n ln n))`.
pub fn coupled_size(n: usize, a: f64) -> usize {
    let nf = n as f64;
    n + (a * (nf * nf.ln()).sqrt()).ceil() as usize
}

struct Trial {
    y: f64,
    y_prime: f64,
    z: Vec<usize>,
    z_prime: Vec<usize>,
    /// Per outside insertion: visible vertices and destroyed faces per
    /// dimension.
    insertions: Vec<(usize, Vec<usize>)>,
}

fn run_trial(body: &Body, n: usize, n_prime: usize, seed: u64, slot: usize, t: usize) -> Result<Trial> {
    let mut rng = trial_stream(seed, slot, t);
    let pair = coupled_pair(body, n, n_prime, &mut rng)?;
    let mut hull = Hull::build(&pair.p)?;
    let y = hull.volume();
    let z = hull.f_vector();
    let mut insertions = Vec::new();
    for q in &pair.q {
        let delta = hull.insert(q)?;
        if !delta.is_zero() {
            insertions.push((delta.visible_vertex_count, delta.destroyed_faces));
        }
    }
    Ok(Trial {
        y,
        y_prime: hull.volume(),
        z,
        z_prime: hull.f_vector(),
        insertions,
    })
}

fn diff_stats(values: &[f64]) -> DiffStats {
    let n = values.len().max(1) as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    DiffStats {
        mean,
        stderr: (var / n).sqrt(),
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        positive: values.iter().filter(|v| **v > 0.0).count(),
        negative: values.iter().filter(|v| **v < 0.0).count(),
    }
}

fn histogram(values: impl Iterator<Item = usize>) -> Vec<HistBin> {
    let mut map: BTreeMap<usize, u64> = BTreeMap::new();
    for v in values {
        *map.entry(v).or_default() += 1;
    }
    map.into_iter()
        .map(|(value, count)| HistBin { value, count })
        .collect()
}

fn insertion_stats(d: usize, offered: u64, records: &[(usize, Vec<usize>)]) -> InsertionStats {
    let ratios = (1..d)
        .map(|i| {
            let pairs: Vec<(f64, f64)> = records
                .iter()
                .filter(|(s0, f)| *s0 >= 2 && f[i] >= 1)
                .map(|(s0, f)| ((*s0 as f64).ln(), (f[i] as f64).ln()))
                .collect();
            let r: Vec<f64> = pairs.iter().map(|(a, b)| b / a).collect();
            let fit = (pairs.len() >= 3)
                .then(|| {
                    let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
                    fit_line(&xs, &ys).ok()
                })
                .flatten();
            FaceRatio {
                i,
                alpha: i.min(d - i),
                pairs: pairs.len(),
                mean_ratio: if r.is_empty() {
                    f64::NAN
                } else {
                    r.iter().sum::<f64>() / r.len() as f64
                },
                max_ratio: r.iter().copied().fold(f64::NAN, f64::max),
                loglog_slope: fit.map(|f| f.slope),
                loglog_slope_stderr: fit.map(|f| f.slope_stderr),
            }
        })
        .collect();
    InsertionStats {
        offered,
        outside: records.len() as u64,
        visible_vertices: histogram(records.iter().map(|r| r.0)),
        destroyed_faces: (0..d)
            .map(|i| histogram(records.iter().map(|r| r.1[i])))
            .collect(),
        ratios,
    }
}

fn typicality(
    ctx: &Ctx,
    slot: usize,
    n: usize,
    m: usize,
    ys: &[f64],
    yps: &[f64],
) -> Result<Typicality> {
    let k = &ctx.cfg.constants;
    let d = ctx.dim() as f64;
    let nf = n as f64;
    let eps = epsilon_star(nf, k.nu)?;
    let body = &ctx.body;
    let rho = wet_part_volume(body, eps, k.wet_samples, &mut ctx.aux_stream(slot, TAG_WET))?;
    let g = g_epsilon(body, eps, k.g_probes, k.g_samples, &mut ctx.aux_stream(slot, TAG_G))?;
    let dev = k.typical_c * (nf.powf(-(d + 3.0) / (d + 1.0)) * nf.ln()).sqrt();
    let diff = k.typical_c * g.value.mean * (m as f64 * rho.mean + nf.ln());
    let count = ys.len().max(1) as f64;
    let mu = ys.iter().sum::<f64>() / count;
    let mu_p = yps.iter().sum::<f64>() / count;
    let (mut c1, mut c2, mut c3, mut all) = (0usize, 0usize, 0usize, 0usize);
    for (y, yp) in ys.iter().zip(yps) {
        let a = (yp - mu_p).abs() <= dev;
        let b = (y - mu).abs() <= dev;
        let c = yp - y <= diff;
        c1 += a as usize;
        c2 += b as usize;
        c3 += c as usize;
        all += (a && b && c) as usize;
    }
    Ok(Typicality {
        c: k.typical_c,
        eps_star: eps,
        rho_eps_star: rho,
        g_eps_star: g,
        deviation_threshold: dev,
        difference_threshold: diff,
        freq_deviation_prime: c1 as f64 / count,
        freq_deviation: c2 as f64 / count,
        freq_difference: c3 as f64 / count,
        freq_all: all as f64 / count,
    })
}

pub(crate) fn run_coupling(ctx: &mut Ctx) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let d = ctx.dim();
    let mut cols = vec!["volume".to_string(), "volume_prime".to_string()];
    for i in 0..d {
        cols.push(format!("f{i}"));
        cols.push(format!("f{i}_prime"));
    }
    ctx.raw.columns = cols;
    let mut rows = Vec::new();
    let mut per_n = Vec::new();
    for (slot, &n) in cfg.n_grid.iter().enumerate() {
        let n_prime = coupled_size(n, cfg.constants.a);
        let m = n_prime - n;
        let body = ctx.body.clone();
        let seed = cfg.master_seed;
        let res = ctx.run_trials(n, |t| run_trial(&body, n, n_prime, seed, slot, t));
        let mut ys = Vec::with_capacity(res.len());
        let mut yps = Vec::with_capacity(res.len());
        let mut zd: Vec<Vec<f64>> = vec![Vec::with_capacity(res.len()); d];
        let mut records = Vec::new();
        for (t, tr) in &res {
            ys.push(tr.y);
            yps.push(tr.y_prime);
            let mut raw = vec![tr.y, tr.y_prime];
            for i in 0..d {
                zd[i].push(tr.z_prime[i] as f64 - tr.z[i] as f64);
                raw.push(tr.z[i] as f64);
                raw.push(tr.z_prime[i] as f64);
            }
            ctx.push_raw(n, *t, raw);
            records.extend(tr.insertions.iter().cloned());
        }
        let dy: Vec<f64> = ys.iter().zip(&yps).map(|(y, yp)| yp - y).collect();
        let s = summarize(n, &dy)?;
        rows.push(NRow::new(n, &s, None));
        let count = ys.len() as f64;
        let mu = ys.iter().sum::<f64>() / count;
        let mu_p = yps.iter().sum::<f64>() / count;
        let shift: Vec<f64> = ys
            .iter()
            .zip(&yps)
            .map(|(y, yp)| (yp - mu_p).powi(2) - (y - mu).powi(2))
            .collect();
        let shift_summary = Summary::of(&shift)?;
        let var = ys.iter().map(|y| (y - mu).powi(2)).sum::<f64>() / count;
        let var_prime = yps.iter().map(|y| (y - mu_p).powi(2)).sum::<f64>() / count;
        let scale = m as f64 * (n as f64).powf(-1.0 - 2.0 / (d as f64 + 1.0));
        let typ = if m > 0 {
            Some(typicality(ctx, slot, n, m, &ys, &yps)?)
        } else {
            None
        };
        per_n.push(CouplingRow {
            n,
            n_prime,
            m,
            trials: res.len(),
            volume_difference: diff_stats(&dy),
            negative_volume_differences: dy.iter().filter(|v| **v < 0.0).count(),
            face_differences: zd.iter().map(|v| diff_stats(v)).collect(),
            var,
            var_prime,
            variance_shift: Estimate {
                mean: shift_summary.mean,
                stderr: shift_summary.mean_stderr,
                samples: shift.len(),
            },
            normalized_difference: (m > 0).then(|| s.mean / scale),
            typicality: typ,
            insertions: insertion_stats(d, (m * res.len()) as u64, &records),
        });
    }
    let norm: Vec<f64> = per_n.iter().filter_map(|r| r.normalized_difference).collect();
    let normalized_spread = (norm.len() >= 2 && norm.iter().all(|v| *v > 0.0)).then(|| {
        norm.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            / norm.iter().copied().fold(f64::INFINITY, f64::min)
    });
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.mean)).collect();
    let mut fits = Vec::new();
    if pairs.len() >= 2 && pairs.iter().all(|p| p.1 > 0.0) {
        // m ~ sqrt(n ln n) times n^{-1-2/(d+1)}, ignoring logarithms.
        let expected = 0.5 - 1.0 - 2.0 / (d as f64 + 1.0);
        if let Ok(f) = fit_power_law(&pairs) {
            fits.push(NamedFit::new("mean_volume_difference", &f, Some(expected)));
        }
    }
    Ok((
        rows,
        fits,
        Details::Coupling(CouplingDetails {
            per_n,
            normalized_spread,
        }),
    ))
}
