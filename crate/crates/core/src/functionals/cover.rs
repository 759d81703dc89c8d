use rand::Rng;
use serde::{Deserialize, Serialize};

use super::floating::FloatingBody;
use super::mincap::{cap_from_unit_ball, direction_grid};
use super::visibility::sees_unchecked;
use crate::geometry::{
    ball_cap_fraction, ball_offset_for_fraction, cap_for_volume_unchecked, Body, Cap, Point,
};
use crate::sampling::{random_direction, sample_uniform};
use crate::{Error, Result};

/// Net spacing as a fraction of the seen-cap angle.
const SPACING_FACTOR: f64 = 0.5;

/// Caps of volume `c2 ln n / n` such that every region seen from a point of
/// the `c0 ln n / n`-wet part lies in one of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapCover {
    pub caps: Vec<Cap>,
    pub n: usize,
    pub c0: f64,
    /// `ln m / ln n` for `m` caps.
    pub c1: f64,
    pub c2: f64,
    /// `c0 ln n / n`.
    pub seen_eps: f64,
    /// `c2 ln n / n`, the volume of every cap.
    pub cap_eps: f64,
    /// Covering radius of the direction net, as an angle in unit-ball
    /// coordinates.
    pub net_spacing: f64,
}

/// Builds the cover for `d = 2, 3`.
///
/// In unit-ball coordinates the region seen from a wet-part point `x` lies
/// in the cap of angular radius `2a` about `x/|x|`, where `a` is the angle of
/// a `c0 ln n / n`-cap. Caps of angular radius `2a + s` centred on a net of
/// covering radius `s` therefore contain every such region; here `s = a/2`.
/// The ellipsoid is handled through its linear map to the ball. For the
/// cube and the simplex the same net and volumes are used with caps of the
/// body itself, and containment is only checked empirically.
///
/// `c2` overrides the derived cap constant; it is rejected when the caps it
/// gives are too narrow for the containment argument.
pub fn build_cap_cover<R: Rng + ?Sized>(
    body: &Body,
    n: usize,
    c0: f64,
    c2: Option<f64>,
    rng: &mut R,
) -> Result<CapCover> {
    let d = body.dim();
    if d > 3 {
        return Err(Error::invalid(format!(
            "cap covers are built for d = 2, 3 only, got d = {d}"
        )));
    }
    if n < 3 {
        return Err(Error::invalid("cap cover needs n >= 3"));
    }
    if !(c0.is_finite() && c0 > 0.0) {
        return Err(Error::invalid(format!("c0 must be positive, got {c0}")));
    }
    let scale = (n as f64).ln() / n as f64;
    let seen_eps = c0 * scale;
    if seen_eps >= 0.5 {
        return Err(Error::invalid(format!("c0 ln n / n = {seen_eps} is not below 1/2")));
    }
    let alpha_s = ball_offset_for_fraction(d, seen_eps).acos();
    let (alpha_b, cap_eps) = match c2 {
        None => {
            let a = (2.0 + SPACING_FACTOR) * alpha_s;
            (a, ball_cap_fraction(d, a.cos()))
        }
        Some(c2) => {
            let eps = c2 * scale;
            if !(eps > 0.0 && eps < 0.5) {
                return Err(Error::invalid(format!("c2 ln n / n = {eps} outside (0, 1/2)")));
            }
            (ball_offset_for_fraction(d, eps).acos(), eps)
        }
    };
    if alpha_b >= std::f64::consts::FRAC_PI_2 || cap_eps >= 0.5 {
        return Err(Error::invalid(format!(
            "cover caps would have volume {cap_eps} >= 1/2 (n = {n} too small for c0 = {c0})"
        )));
    }
    let spacing = alpha_b - 2.0 * alpha_s;
    if spacing <= 0.0 {
        return Err(Error::invalid(format!(
            "c2 too small: cap angle {alpha_b} does not exceed twice the seen angle {alpha_s}"
        )));
    }
    let dirs = net(d, spacing, rng);
    let caps: Vec<Cap> = if body.is_smooth() {
        let h = alpha_b.cos();
        dirs.iter().map(|v| cap_from_unit_ball(body, v, h)).collect()
    } else {
        dirs.iter()
            .map(|v| cap_for_volume_unchecked(body, v, cap_eps))
            .collect()
    };
    let m = caps.len() as f64;
    Ok(CapCover {
        c1: m.ln() / (n as f64).ln(),
        caps,
        n,
        c0,
        c2: cap_eps / scale,
        seen_eps,
        cap_eps,
        net_spacing: spacing,
    })
}

/// Unit directions with covering radius at most `spacing`, randomly
/// rotated.
fn net<R: Rng + ?Sized>(d: usize, spacing: f64, rng: &mut R) -> Vec<Point> {
    if d == 2 {
        let m = (std::f64::consts::PI / spacing).ceil().max(3.0) as usize;
        let phase = rng.random::<f64>() * std::f64::consts::TAU;
        return (0..m)
            .map(|k| {
                let (s, c) = (phase + std::f64::consts::TAU * k as f64 / m as f64).sin_cos();
                Point::from_fn(2, |i| if i == 0 { c } else { s })
            })
            .collect();
    }
    // A Fibonacci lattice of m points has covering radius below
    // 3.5 / sqrt(m) (checked in the tests).
    let m = (12.25 / (spacing * spacing)).ceil().max(8.0) as usize;
    let (grid, _) = direction_grid(3, m);
    let frame = random_frame(rng);
    grid.iter()
        .map(|g| Point::from_fn(3, |i| (0..3).map(|j| frame[j][i] * g[j]).sum()))
        .collect()
}

fn random_frame<R: Rng + ?Sized>(rng: &mut R) -> [Point; 3] {
    loop {
        let a = random_direction(3, rng);
        let b0 = random_direction(3, rng);
        let Some(b) = b0.offset_by(&a, -b0.dot(&a)).normalized() else {
            continue;
        };
        if b0.offset_by(&a, -b0.dot(&a)).norm() < 1e-3 {
            continue;
        }
        let c = Point::from_fn(3, |i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            a[j] * b[k] - a[k] * b[j]
        });
        return [a, b, c];
    }
}

/// Outcome of [`audit_cap_cover`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverAudit {
    pub points: usize,
    /// Points whose sampled seen region fit in no cap.
    pub uncovered: usize,
    /// Total number of seen samples checked.
    pub seen_samples: usize,
}

/// Draws `points` uniform points of the `c0 ln n / n`-wet part and, for
/// each, `proposals` uniform points of the body; checks that the point and
/// the proposals it sees all lie in a single cover cap.
pub fn audit_cap_cover<R: Rng + ?Sized>(
    cover: &CapCover,
    body: &Body,
    points: usize,
    proposals: usize,
    rng: &mut R,
) -> Result<CoverAudit> {
    let oracle = FloatingBody::new(body, cover.seen_eps)?;
    let mut audit = CoverAudit {
        points,
        uncovered: 0,
        seen_samples: 0,
    };
    for _ in 0..points {
        let x = loop {
            let x = sample_uniform(body, rng);
            if !oracle.contains_unchecked(&x) {
                break x;
            }
        };
        let mut seen = vec![x];
        for _ in 0..proposals {
            let y = sample_uniform(body, rng);
            if sees_unchecked(&oracle, &x, &y) {
                seen.push(y);
            }
        }
        audit.seen_samples += seen.len() - 1;
        if !cover.caps.iter().any(|c| seen.iter().all(|y| c.contains(y))) {
            audit.uncovered += 1;
        }
    }
    Ok(audit)
}
