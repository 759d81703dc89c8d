use rand::Rng;
use serde::{Deserialize, Serialize};

use super::floating::FloatingBody;
use super::mincap::to_unit_ball;
use super::Estimate;
use crate::geometry::{Body, Point};
use crate::sampling::{random_direction, sample_uniform};
use crate::{Error, Result};

/// Number of equally spaced segment points examined before the
/// golden-section refinement.
const SCAN_POINTS: usize = 64;

fn check_pair(oracle: &FloatingBody, x: &Point, y: &Point) -> Result<()> {
    for p in [x, y] {
        oracle.body().check_dim(p)?;
        if !oracle.body().contains(p) {
            return Err(Error::invalid(format!("point {p:?} lies outside the body")));
        }
    }
    if oracle.contains_unchecked(x) {
        return Err(Error::invalid(format!(
            "x = {x:?} lies in the floating body; only wet-part points see"
        )));
    }
    Ok(())
}

/// Whether the segment `xy` avoids `F_eps`. `x` must lie in the wet part.
pub fn sees(oracle: &FloatingBody, x: &Point, y: &Point) -> Result<bool> {
    check_pair(oracle, x, y)?;
    Ok(sees_unchecked(oracle, x, y))
}

/// [`sees`] through the segment search for every body, bypassing the
/// closed form for the ball and the ellipsoid and the half-space table for
/// polytopes.
pub fn sees_by_segment_search(oracle: &FloatingBody, x: &Point, y: &Point) -> Result<bool> {
    check_pair(oracle, x, y)?;
    if oracle.contains_unchecked(y) {
        return Ok(false);
    }
    Ok(segment_search(oracle, x, y))
}

pub(crate) fn sees_unchecked(oracle: &FloatingBody, x: &Point, y: &Point) -> bool {
    // The table test also catches y in F_eps, since the segment then meets it.
    if let Some(meets) = oracle.segment_meets_table(x, y) {
        return !meets;
    }
    if oracle.contains_unchecked(y) {
        return false;
    }
    match oracle.relative_radius() {
        Some(h) => {
            // In unit-ball coordinates F_eps is the ball of radius h.
            let a = to_unit_ball(oracle.body(), x);
            let b = to_unit_ball(oracle.body(), y);
            segment_distance_to_origin(&a, &b) > h
        }
        None => segment_search(oracle, x, y),
    }
}

fn segment_distance_to_origin(a: &Point, b: &Point) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.norm2();
    let t = if len2 > 0.0 {
        (-a.dot(&ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    a.offset_by(&ab, t).norm()
}

/// The minimal cap volume is quasi-concave (its superlevel sets are the
/// convex floating bodies), so along a segment it is unimodal: scan, then
/// refine the best bracket by golden section.
fn segment_search(oracle: &FloatingBody, x: &Point, y: &Point) -> bool {
    let dir = y.sub(x);
    let at = |t: f64| oracle.margin_unchecked(&x.offset_by(&dir, t));
    let mut best = (f64::NEG_INFINITY, 0usize);
    for k in 0..SCAN_POINTS {
        let m = at(k as f64 / (SCAN_POINTS - 1) as f64);
        if m >= 0.0 {
            return false;
        }
        if m > best.0 {
            best = (m, k);
        }
    }
    let step = 1.0 / (SCAN_POINTS - 1) as f64;
    let (mut lo, mut hi) = (
        (best.1 as f64 - 1.0).max(0.0) * step,
        (best.1 as f64 + 1.0).min((SCAN_POINTS - 1) as f64) * step,
    );
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (at(c), at(d));
    for _ in 0..40 {
        if fc.max(fd) >= 0.0 {
            return false;
        }
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = at(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = at(d);
        }
    }
    fc.max(fd) < 0.0
}

/// `Vol(S_{x,eps})` by Monte Carlo over uniform `y`.
pub fn visibility_volume<R: Rng + ?Sized>(
    oracle: &FloatingBody,
    x: &Point,
    samples: usize,
    rng: &mut R,
) -> Result<Estimate> {
    check_pair(oracle, x, x)?;
    if samples == 0 {
        return Err(Error::invalid("visibility volume needs samples > 0"));
    }
    let body = oracle.body();
    let hits = (0..samples)
        .filter(|_| sees_unchecked(oracle, x, &sample_uniform(body, rng)))
        .count();
    Ok(Estimate::proportion(hits, samples))
}

/// Probe-maximum estimate of `g(eps)`; a lower bound on the supremum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GEstimate {
    /// The largest probe estimate.
    pub value: Estimate,
    pub probes: usize,
    pub samples_per_probe: usize,
    /// The boundary point that attained the maximum.
    pub argmax: Point,
}

/// `max` of [`visibility_volume`] over `probes` uniform-direction points on
/// the body boundary, where the supremum is approached.
pub fn g_epsilon<R: Rng + ?Sized>(
    body: &Body,
    eps: f64,
    probes: usize,
    samples: usize,
    rng: &mut R,
) -> Result<GEstimate> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::invalid(format!("g(eps) needs 0 < eps < 1/2, got {eps}")));
    }
    if probes == 0 {
        return Err(Error::invalid("g(eps) needs at least one probe"));
    }
    let oracle = FloatingBody::new(body, eps)?;
    let mut best: Option<(Estimate, Point)> = None;
    for _ in 0..probes {
        let x = body.boundary_point(&random_direction(body.dim(), rng))?;
        let v = visibility_volume(&oracle, &x, samples, rng)?;
        if best.as_ref().is_none_or(|(b, _)| v.mean > b.mean) {
            best = Some((v, x));
        }
    }
    let (value, argmax) = best.expect("probes > 0");
    Ok(GEstimate {
        value,
        probes,
        samples_per_probe: samples,
        argmax,
    })
}
