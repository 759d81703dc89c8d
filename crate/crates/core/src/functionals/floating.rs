use std::sync::OnceLock;

use rand::Rng;

use super::mincap::{
    direction_grid, from_unit_ball, minimal_cap_unchecked, search, to_unit_ball, MinimalCap, DEFAULT_DIRECTIONS,
};
use super::Estimate;
use crate::geometry::{ball_cap_fraction, ball_offset_for_fraction, cap_for_volume_unchecked, Body, BodyKind, Point};
use crate::sampling::{random_direction, sample_uniform};
use crate::{Error, Result};

/// Default Monte Carlo sample count for wet-part volumes of non-smooth
/// bodies.
pub const DEFAULT_WET_SAMPLES: usize = 1_000_000;

/// Membership oracle for the floating body
/// `F_eps = {x in K : every cap through x has volume >= eps}`.
#[derive(Debug, Clone)]
pub struct FloatingBody {
    body: Body,
    eps: f64,
    directions: usize,
    /// Relative radius of `F_eps` in unit-ball coordinates, for the ball and
    /// the ellipsoid.
    radial: Option<f64>,
    /// Half-spaces `u . y <= s_u` whose intersection is `F_eps`, over a
    /// dense direction grid; built on first use for polytopes in `d <= 3`.
    halfspaces: OnceLock<Vec<(Point, f64)>>,
}

/// Grid sizes for the half-space description of a polytope's floating body.
const HALFSPACE_DIRECTIONS_2D: usize = 4096;
const HALFSPACE_DIRECTIONS_3D: usize = 16384;

impl FloatingBody {
    pub fn new(body: &Body, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 0.5) {
            return Err(Error::invalid(format!("eps = {eps} outside (0, 1/2]")));
        }
        let radial = body
            .is_smooth()
            .then(|| ball_offset_for_fraction(body.dim(), eps).max(0.0));
        Ok(FloatingBody {
            body: body.clone(),
            eps,
            directions: DEFAULT_DIRECTIONS,
            radial,
            halfspaces: OnceLock::new(),
        })
    }

    /// Number of grid directions used for non-smooth bodies.
    pub fn with_directions(mut self, directions: usize) -> Result<Self> {
        if directions < 8 {
            return Err(Error::invalid("direction search needs at least 8 directions"));
        }
        self.directions = directions;
        Ok(self)
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Radius of the floating body in unit-ball coordinates (ball and
    /// ellipsoid only).
    pub fn relative_radius(&self) -> Option<f64> {
        self.radial
    }

    fn check(&self, x: &Point) -> Result<()> {
        self.body.check_dim(x)?;
        if !self.body.contains(x) {
            return Err(Error::invalid(format!("point {x:?} lies outside the body")));
        }
        Ok(())
    }

    pub fn minimal_cap(&self, x: &Point) -> Result<MinimalCap> {
        self.check(x)?;
        Ok(minimal_cap_unchecked(&self.body, x, self.directions))
    }

    /// `minimal cap volume - eps`; nonnegative exactly on `F_eps`.
    pub fn margin(&self, x: &Point) -> Result<f64> {
        Ok(self.minimal_cap(x)?.volume - self.eps)
    }

    /// Whether `x` lies in `F_eps`, decided by the sign of the margin.
    pub fn contains(&self, x: &Point) -> Result<bool> {
        self.check(x)?;
        Ok(self.contains_unchecked(x))
    }

    pub(crate) fn contains_unchecked(&self, x: &Point) -> bool {
        if self.radial.is_some() {
            let rho = to_unit_ball(&self.body, x).norm();
            return ball_cap_fraction(self.body.dim(), rho) >= self.eps;
        }
        // Stop at the first cap below eps: the answer is already known.
        search(&self.body, x, self.directions, Some(self.eps)).volume >= self.eps
    }

    /// `F_eps = {y : u . y <= s_u for every unit u}`, where `{u . y >= s_u}`
    /// is the eps-cap in direction `u`. The table holds this for a dense
    /// grid plus the facet normals, an outer approximation of `F_eps`.
    fn halfspace_table(&self) -> Option<&[(Point, f64)]> {
        let d = self.body.dim();
        if self.radial.is_some() || d > 3 {
            return None;
        }
        let table = self.halfspaces.get_or_init(|| {
            let count = if d == 2 { HALFSPACE_DIRECTIONS_2D } else { HALFSPACE_DIRECTIONS_3D };
            let (mut dirs, _) = direction_grid(d, count);
            for i in 0..d {
                dirs.push(Point::basis(d, i).scale(-1.0));
                if self.body.kind() == BodyKind::Cube {
                    dirs.push(Point::basis(d, i));
                }
            }
            if self.body.kind() == BodyKind::Simplex {
                dirs.push(Point::from_fn(d, |_| 1.0 / (d as f64).sqrt()));
            }
            dirs.into_iter()
                .map(|u| {
                    let s = cap_for_volume_unchecked(&self.body, &u, self.eps).offset;
                    (u, s)
                })
                .collect()
        });
        Some(table)
    }

    /// Whether the segment `xy` meets the half-space description of
    /// `F_eps`; `None` where no table is kept.
    pub(crate) fn segment_meets_table(&self, x: &Point, y: &Point) -> Option<bool> {
        let table = self.halfspace_table()?;
        let dir = y.sub(x);
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for (u, s) in table {
            let a = u.dot(x);
            let b = u.dot(&dir);
            if b > 0.0 {
                hi = hi.min((s - a) / b);
            } else if b < 0.0 {
                lo = lo.max((s - a) / b);
            } else if a > *s {
                return Some(false);
            }
            if lo > hi {
                return Some(false);
            }
        }
        Some(true)
    }

    pub(crate) fn margin_unchecked(&self, x: &Point) -> f64 {
        minimal_cap_unchecked(&self.body, x, self.directions).volume - self.eps
    }

    /// Points on the boundary of `F_eps`, one per random direction from the
    /// centroid. Exact for the ball and the ellipsoid, found by bisection of
    /// the margin along the ray otherwise.
    pub fn boundary_probes<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Result<Vec<Point>> {
        let d = self.body.dim();
        if let Some(h) = self.radial {
            return Ok((0..count)
                .map(|_| from_unit_ball(&self.body, &random_direction(d, rng).scale(h)))
                .collect());
        }
        let c = self.body.centroid();
        if self.margin_unchecked(&c) < 0.0 {
            return Err(Error::invalid(format!(
                "floating body with eps = {} does not contain the centroid",
                self.eps
            )));
        }
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let u = random_direction(d, rng);
            let far = self.body.boundary_point(&u)?;
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            for _ in 0..40 {
                let mid = 0.5 * (lo + hi);
                let z = c.offset_by(&far.sub(&c), mid);
                if self.margin_unchecked(&z) >= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(c.offset_by(&far.sub(&c), lo));
        }
        Ok(out)
    }
}

/// `Vol(K \ F_eps)`: closed form `1 - h^d` for the ball and the ellipsoid,
/// a Monte Carlo proportion over `samples` uniform points otherwise.
pub fn wet_part_volume<R: Rng + ?Sized>(body: &Body, eps: f64, samples: usize, rng: &mut R) -> Result<Estimate> {
    let oracle = FloatingBody::new(body, eps)?;
    if let Some(h) = oracle.radial {
        return Ok(Estimate::exact(1.0 - h.powi(body.dim() as i32)));
    }
    if samples == 0 {
        return Err(Error::invalid("Monte Carlo wet-part volume needs samples > 0"));
    }
    let wet = (0..samples)
        .filter(|_| !oracle.contains_unchecked(&sample_uniform(body, rng)))
        .count();
    Ok(Estimate::proportion(wet, samples))
}

/// [`wet_part_volume`] at several `eps` from one shared sample: each point's
/// minimal cap volume is found once and compared with every `eps`.
pub fn wet_part_profile<R: Rng + ?Sized>(
    body: &Body,
    eps: &[f64],
    samples: usize,
    rng: &mut R,
) -> Result<Vec<Estimate>> {
    let oracles: Vec<FloatingBody> = eps.iter().map(|e| FloatingBody::new(body, *e)).collect::<Result<_>>()?;
    if body.is_smooth() || eps.is_empty() {
        return oracles.iter().map(|o| wet_part_volume(body, o.eps, samples, rng)).collect();
    }
    if samples == 0 {
        return Err(Error::invalid("Monte Carlo wet-part volume needs samples > 0"));
    }
    let smallest = eps.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut wet = vec![0usize; eps.len()];
    for _ in 0..samples {
        let x = sample_uniform(body, rng);
        // Stopping below the smallest eps leaves every decision unchanged.
        let m = search(body, &x, DEFAULT_DIRECTIONS, Some(smallest)).volume;
        for (w, e) in wet.iter_mut().zip(eps) {
            if m < *e {
                *w += 1;
            }
        }
    }
    Ok(wet.into_iter().map(|w| Estimate::proportion(w, samples)).collect())
}

/// `eps* = nu ln n / n`.
pub fn epsilon_star(n: f64, nu: f64) -> Result<f64> {
    if !(n.is_finite() && n >= 2.0) {
        return Err(Error::invalid(format!("epsilon_star needs n >= 2, got {n}")));
    }
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::invalid(format!("epsilon_star needs nu > 0, got {nu}")));
    }
    Ok(nu * n.ln() / n)
}
