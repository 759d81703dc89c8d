//! Floating-body containment, k-wide volumes, maximal wideness and the
//! perfect-set conditions.

use super::details::{CoverResult, Details, FloatingDetails, FloatingRow};
use super::report::NRow;
use super::runner::{sample, summarize, trial_stream, Ctx, TAG_COVER, TAG_PROBES, TAG_WET, TAG_WIDE};
use super::scaling::Outcome;
use crate::functionals::{
    audit_cap_cover, build_cap_cover, epsilon_star, wet_part_profile, wideness_profile, Estimate,
    FloatingBody,
};
use crate::hull::Hull;
use crate::{Error, Result};

struct Trial {
    contained: bool,
    wide: Vec<f64>,
    max_wideness: usize,
    missed: f64,
    wide_bounded: bool,
    no_wide_points: bool,
    missed_bounded: bool,
}

pub(crate) fn run_floating_and_wide(ctx: &mut Ctx) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let k = &cfg.constants;
    let model = cfg.effective_model();
    ctx.set_raw_columns(&["missed_volume", "max_wideness", "contained", "perfect"]);
    let mut rows = Vec::new();
    let mut per_n = Vec::new();
    for (slot, &n) in cfg.n_grid.iter().enumerate() {
        let nf = n as f64;
        let ln = nf.ln();
        let eps = epsilon_star(nf, k.nu)?;
        if eps > 0.5 {
            return Err(Error::data(format!(
                "eps* = {eps} exceeds 1/2 at n = {n}; increase n or decrease nu"
            )));
        }
        let body = ctx.body.clone();
        let oracle = FloatingBody::new(&body, eps)?;
        let probes = oracle.boundary_probes(k.probes, &mut ctx.aux_stream(slot, TAG_PROBES))?;
        let threshold = k.c5 * ln;
        let kmax = threshold.floor() as usize + 1;
        let k_lo = (k.c3.ceil() as usize).max(1);
        let k_hi = threshold.floor() as usize;
        // rho_{1/n} and rho_{k/(c4 n)} for the T_k bounds, from one sample.
        let eps_k = |kk: usize| kk as f64 / (k.c4 * nf);
        let mut wet_eps = vec![1.0 / nf];
        wet_eps.extend((k_lo..=k_hi).map(eps_k).filter(|e| *e < 0.5));
        let wet = wet_part_profile(&body, &wet_eps, k.wet_samples, &mut ctx.aux_stream(slot, TAG_WET))?;
        let rho_1n = wet[0];
        let rho_k = |kk: usize| wet.get(1 + kk - k_lo).map_or(1.0, |e| e.mean);
        let seed = cfg.master_seed;
        let res = ctx.run_trials(n, |t| {
            let mut rng = trial_stream(seed, slot, t);
            let pts = sample(&body, n, model, &mut rng)?;
            let hull = Hull::build(&pts)?;
            let contained = probes.iter().all(|p| hull.contains(p));
            let prof = wideness_profile(&hull, &body, kmax, k.wide_samples, &mut rng.substream(TAG_WIDE))?;
            let wide: Vec<f64> = prof.volumes.iter().map(|e| e.mean).collect();
            let floor = k.c6 * ln / nf;
            let mut wide_bounded = true;
            for kk in k_lo..=k_hi {
                let u = wide[kk - 1];
                let base = k.c3 * kk as f64 / (k.c4 * nf);
                if u <= base.max(floor) {
                    continue;
                }
                let t_k = (k.c3 * eps_k(kk).max(rho_k(kk) * (-k.wide_decay * kk as f64).exp())).max(floor);
                if u > t_k {
                    wide_bounded = false;
                    break;
                }
            }
            let missed = 1.0 - hull.volume();
            Ok(Trial {
                contained,
                wide,
                max_wideness: prof.max_wideness,
                missed,
                wide_bounded,
                no_wide_points: prof.max_wideness as f64 <= threshold,
                missed_bounded: missed <= k.c7 * rho_1n.mean,
            })
        });
        let count = res.len();
        let cf = count.max(1) as f64;
        let freq = |f: &dyn Fn(&Trial) -> bool| res.iter().filter(|(_, t)| f(t)).count() as f64 / cf;
        let mut wide_volumes = Vec::with_capacity(kmax);
        for kk in 0..kmax {
            let v: Vec<f64> = res.iter().map(|(_, t)| t.wide[kk]).collect();
            let mean = v.iter().sum::<f64>() / cf;
            let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / cf;
            wide_volumes.push(Estimate {
                mean,
                stderr: (var / cf).sqrt(),
                samples: count * k.wide_samples,
            });
        }
        let maxw: Vec<f64> = res.iter().map(|(_, t)| t.max_wideness as f64).collect();
        for (t, tr) in &res {
            let perfect = tr.wide_bounded && tr.no_wide_points && tr.missed_bounded;
            ctx.push_raw(
                n,
                *t,
                vec![tr.missed, tr.max_wideness as f64, tr.contained as u8 as f64, perfect as u8 as f64],
            );
        }
        let s = summarize(n, &maxw)?;
        rows.push(NRow::new(n, &s, None));
        let not_contained = res.iter().filter(|(_, t)| !t.contained).count();
        let cover = k.cover_audit.then(|| {
            let mut rng = ctx.aux_stream(slot, TAG_COVER);
            match build_cap_cover(&body, n, k.c0, k.c2, &mut rng) {
                Err(e) => CoverResult {
                    caps: 0,
                    c1: f64::NAN,
                    c2: f64::NAN,
                    audit: None,
                    error: Some(e.to_string()),
                },
                Ok(cover) => {
                    let audit = audit_cap_cover(&cover, &body, k.audit_points, k.audit_proposals, &mut rng);
                    CoverResult {
                        caps: cover.caps.len(),
                        c1: cover.c1,
                        c2: cover.c2,
                        error: audit.as_ref().err().map(|e| e.to_string()),
                        audit: audit.ok(),
                    }
                }
            }
        });
        per_n.push(FloatingRow {
            n,
            trials: count,
            eps_star: eps,
            probes: probes.len(),
            not_contained,
            not_contained_freq: not_contained as f64 / cf,
            wide_non_increasing: wide_volumes.windows(2).all(|w| w[1].mean <= w[0].mean),
            wide_volumes,
            wideness_threshold: threshold,
            max_wideness: res.iter().map(|(_, t)| t.max_wideness).max().unwrap_or(0),
            mean_max_wideness: s.mean,
            trials_over_threshold: res.iter().filter(|(_, t)| !t.no_wide_points).count(),
            rho_one_over_n: rho_1n,
            freq_wide_bounded: freq(&|t| t.wide_bounded),
            freq_no_wide_points: freq(&|t| t.no_wide_points),
            freq_missed_bounded: freq(&|t| t.missed_bounded),
            freq_perfect: freq(&|t| t.wide_bounded && t.no_wide_points && t.missed_bounded),
            cover,
        });
    }
    Ok((rows, Vec::new(), Details::FloatingAndWide(FloatingDetails { per_n })))
}
