use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Estimate;
use crate::geometry::Body;
use crate::hull::Hull;
use crate::sampling::sample_uniform;
use crate::{Error, Result};

/// Estimate of `Vol(U_{k,P})` together with the largest wideness met.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WideEstimate {
    pub volume: Estimate,
    pub max_wideness: usize,
}

/// `Vol(U_{k,P})` for every `k = 1..=kmax` from one set of probes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WideProfile {
    /// Entry `k - 1` estimates `Vol(U_{k,P})`.
    pub volumes: Vec<Estimate>,
    pub max_wideness: usize,
    pub samples: usize,
}

fn check(hull: &Hull, body: &Body, samples: usize) -> Result<()> {
    if hull.dim() != body.dim() {
        return Err(Error::invalid(format!(
            "hull dimension {} differs from body dimension {}",
            hull.dim(),
            body.dim()
        )));
    }
    if samples == 0 {
        return Err(Error::invalid("wideness estimate needs samples > 0"));
    }
    Ok(())
}

/// Histogram of visible-vertex counts over `samples` uniform probes.
fn wideness_histogram<R: Rng + ?Sized>(hull: &Hull, body: &Body, samples: usize, rng: &mut R) -> Vec<usize> {
    let mut hist = vec![0usize; hull.vertex_count() + 1];
    for _ in 0..samples {
        let w = hull.visible_vertex_count(&sample_uniform(body, rng));
        hist[w] += 1;
    }
    hist
}

fn max_of(hist: &[usize]) -> usize {
    hist.iter().rposition(|&c| c > 0).unwrap_or(0)
}

/// Fraction of uniform points of `body` that see at least `k` vertices of
/// the hull.
pub fn wide_volume_estimate<R: Rng + ?Sized>(
    hull: &Hull,
    body: &Body,
    k: usize,
    samples: usize,
    rng: &mut R,
) -> Result<WideEstimate> {
    if k == 0 {
        return Err(Error::invalid("wideness threshold k must be at least 1"));
    }
    check(hull, body, samples)?;
    let hist = wideness_histogram(hull, body, samples, rng);
    let hits = hist.iter().skip(k).sum();
    Ok(WideEstimate {
        volume: Estimate::proportion(hits, samples),
        max_wideness: max_of(&hist),
    })
}

/// Like [`wide_volume_estimate`] for all `k <= kmax` at once; the entries
/// are non-increasing by construction.
pub fn wideness_profile<R: Rng + ?Sized>(
    hull: &Hull,
    body: &Body,
    kmax: usize,
    samples: usize,
    rng: &mut R,
) -> Result<WideProfile> {
    if kmax == 0 {
        return Err(Error::invalid("wideness profile needs kmax >= 1"));
    }
    check(hull, body, samples)?;
    let hist = wideness_histogram(hull, body, samples, rng);
    let mut tail = hist.iter().sum::<usize>();
    let mut volumes = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        tail -= hist.get(k - 1).copied().unwrap_or(0);
        volumes.push(Estimate::proportion(tail, samples));
    }
    Ok(WideProfile {
        volumes,
        max_wideness: max_of(&hist),
        samples,
    })
}
