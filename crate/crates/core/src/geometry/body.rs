use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::point::{Point, MAX_DIM};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyKind {
    Ball,
    Cube,
    Simplex,
    Ellipsoid,
}

impl BodyKind {
    pub fn is_smooth(self) -> bool {
        matches!(self, BodyKind::Ball | BodyKind::Ellipsoid)
    }
}

/// Relative tolerance of [`Body::contains`].
pub const BOUNDARY_SLACK: f64 = 1e-12;

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / d as f64 * unit_ball_volume(d - 2),
    }
}

fn factorial(d: usize) -> f64 {
    (1..=d).map(|k| k as f64).product()
}

/// A convex body of volume one.
///
/// * ball: centered at the origin with radius `kappa_d^(-1/d)`;
/// * cube: `[0, 1]^d`;
/// * simplex: `s * conv(0, e_1, ..., e_d)` with `s = (d!)^(1/d)`;
/// * ellipsoid: centered at the origin, semi-axes proportional to `params`.
#[derive(Debug, Clone, PartialEq)]
pub struct Body {
    kind: BodyKind,
    dim: usize,
    params: Vec<f64>,
    scale: f64,
    axes: [f64; MAX_DIM],
}

impl Body {
    pub fn new(kind: BodyKind, dim: usize, params: &[f64]) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(Error::invalid(format!(
                "body dimension {dim} outside 2..={MAX_DIM}"
            )));
        }
        let kd = unit_ball_volume(dim);
        let mut axes = [0.0; MAX_DIM];
        let scale = match kind {
            BodyKind::Ball | BodyKind::Cube | BodyKind::Simplex if !params.is_empty() => {
                return Err(Error::invalid(format!("{kind:?} takes no parameters")));
            }
            BodyKind::Ball => {
                let r = kd.powf(-1.0 / dim as f64);
                axes[..dim].fill(r);
                r
            }
            BodyKind::Cube => 1.0,
            BodyKind::Simplex => factorial(dim).powf(1.0 / dim as f64),
            BodyKind::Ellipsoid => {
                if params.len() != dim {
                    return Err(Error::invalid(format!(
                        "ellipsoid in dimension {dim} needs {dim} semi-axes, got {}",
                        params.len()
                    )));
                }
                if params.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
                    return Err(Error::invalid("ellipsoid semi-axes must be positive"));
                }
                let prod: f64 = params.iter().product();
                let s = (1.0 / (kd * prod)).powf(1.0 / dim as f64);
                for (a, p) in axes.iter_mut().zip(params) {
                    *a = p * s;
                }
                s
            }
        };
        let body = Body {
            kind,
            dim,
            params: params.to_vec(),
            scale,
            axes,
        };
        debug_assert!((body.volume() - 1.0).abs() < 1e-12);
        Ok(body)
    }

    pub fn ball(dim: usize) -> Result<Self> {
        Self::new(BodyKind::Ball, dim, &[])
    }

    pub fn cube(dim: usize) -> Result<Self> {
        Self::new(BodyKind::Cube, dim, &[])
    }

    pub fn simplex(dim: usize) -> Result<Self> {
        Self::new(BodyKind::Simplex, dim, &[])
    }

    pub fn ellipsoid(semi_axes: &[f64]) -> Result<Self> {
        Self::new(BodyKind::Ellipsoid, semi_axes.len(), semi_axes)
    }

    pub fn kind(&self) -> BodyKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Normalization factor: the radius for the ball, the edge scale for the
    /// simplex, the axis multiplier for the ellipsoid and 1 for the cube.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Semi-axes of a ball or ellipsoid (all equal to the radius for a ball).
    pub fn semi_axes(&self) -> &[f64] {
        &self.axes[..self.dim]
    }

    pub fn radius(&self) -> Option<f64> {
        (self.kind == BodyKind::Ball).then_some(self.scale)
    }

    pub fn is_smooth(&self) -> bool {
        self.kind.is_smooth()
    }

    /// Volume computed from the closed form; equals one up to rounding.
    pub fn volume(&self) -> f64 {
        let d = self.dim;
        match self.kind {
            BodyKind::Ball | BodyKind::Ellipsoid => {
                unit_ball_volume(d) * self.semi_axes().iter().product::<f64>()
            }
            BodyKind::Cube => 1.0,
            BodyKind::Simplex => self.scale.powi(d as i32) / factorial(d),
        }
    }

    pub fn check_dim(&self, x: &Point) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::invalid(format!(
                "point of dimension {} in a body of dimension {}",
                x.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Closed membership test, with a relative slack of [`BOUNDARY_SLACK`]
    /// so that computed boundary points count as inside. Points of the
    /// wrong dimension are outside.
    pub fn contains(&self, x: &Point) -> bool {
        if x.dim() != self.dim {
            return false;
        }
        let c = x.coords();
        let tol = BOUNDARY_SLACK;
        match self.kind {
            BodyKind::Ball => x.norm2() <= self.scale * self.scale * (1.0 + tol),
            BodyKind::Ellipsoid => {
                c.iter()
                    .zip(self.semi_axes())
                    .map(|(v, a)| (v / a) * (v / a))
                    .sum::<f64>()
                    <= 1.0 + tol
            }
            BodyKind::Cube => c.iter().all(|v| (-tol..=1.0 + tol).contains(v)),
            BodyKind::Simplex => {
                c.iter().all(|v| *v >= -tol * self.scale)
                    && c.iter().sum::<f64>() <= self.scale * (1.0 + tol)
            }
        }
    }

    /// Support function `h_K(u) = max_{y in K} u . y` for a unit vector `u`.
    pub fn support(&self, u: &Point) -> Result<f64> {
        self.check_dim(u)?;
        super::check_unit(u)?;
        Ok(self.support_unchecked(u))
    }

    pub(crate) fn support_unchecked(&self, u: &Point) -> f64 {
        let c = u.coords();
        match self.kind {
            BodyKind::Ball => self.scale * u.norm(),
            BodyKind::Ellipsoid => c
                .iter()
                .zip(self.semi_axes())
                .map(|(v, a)| (v * a) * (v * a))
                .sum::<f64>()
                .sqrt(),
            BodyKind::Cube => c.iter().map(|v| v.max(0.0)).sum(),
            BodyKind::Simplex => self.scale * c.iter().fold(0.0f64, |m, v| m.max(*v)),
        }
    }

    /// Axis-aligned bounding box as `(lower, upper)` corners.
    pub fn bounding_box(&self) -> (Point, Point) {
        let d = self.dim;
        match self.kind {
            BodyKind::Ball | BodyKind::Ellipsoid => (
                Point::from_fn(d, |i| -self.axes[i]),
                Point::from_fn(d, |i| self.axes[i]),
            ),
            BodyKind::Cube => (Point::origin(d), Point::from_fn(d, |_| 1.0)),
            BodyKind::Simplex => (Point::origin(d), Point::from_fn(d, |_| self.scale)),
        }
    }

    pub fn centroid(&self) -> Point {
        let d = self.dim;
        match self.kind {
            BodyKind::Ball | BodyKind::Ellipsoid => Point::origin(d),
            BodyKind::Cube => Point::from_fn(d, |_| 0.5),
            BodyKind::Simplex => Point::from_fn(d, |_| self.scale / (d + 1) as f64),
        }
    }

    /// Vertices of a polytopal body; empty for smooth bodies.
    pub fn vertices(&self) -> Vec<Point> {
        let d = self.dim;
        match self.kind {
            BodyKind::Ball | BodyKind::Ellipsoid => Vec::new(),
            BodyKind::Cube => (0..1usize << d)
                .map(|mask| Point::from_fn(d, |i| ((mask >> i) & 1) as f64))
                .collect(),
            BodyKind::Simplex => std::iter::once(Point::origin(d))
                .chain((0..d).map(|i| Point::basis(d, i).scale(self.scale)))
                .collect(),
        }
    }

    /// Edges of a polytopal body as index pairs into [`Body::vertices`].
    pub(crate) fn edges(&self) -> Vec<(usize, usize)> {
        let d = self.dim;
        match self.kind {
            BodyKind::Ball | BodyKind::Ellipsoid => Vec::new(),
            BodyKind::Cube => (0..1usize << d)
                .flat_map(|m| (0..d).filter(move |i| m & (1 << i) == 0).map(move |i| (m, m | (1 << i))))
                .collect(),
            BodyKind::Simplex => (0..=d)
                .flat_map(|i| ((i + 1)..=d).map(move |j| (i, j)))
                .collect(),
        }
    }

    /// Point where the ray from the centroid in direction `dir` leaves the
    /// body.
    pub fn boundary_point(&self, dir: &Point) -> Result<Point> {
        self.check_dim(dir)?;
        let v = dir
            .normalized()
            .ok_or_else(|| Error::invalid("boundary direction must be nonzero"))?;
        let c = self.centroid();
        let t = match self.kind {
            BodyKind::Ball => self.scale,
            BodyKind::Ellipsoid => {
                let q: f64 = v
                    .coords()
                    .iter()
                    .zip(self.semi_axes())
                    .map(|(x, a)| (x / a) * (x / a))
                    .sum();
                1.0 / q.sqrt()
            }
            BodyKind::Cube => v
                .coords()
                .iter()
                .filter(|x| **x != 0.0)
                .map(|x| 0.5 / x.abs())
                .fold(f64::INFINITY, f64::min),
            BodyKind::Simplex => {
                let mut t = f64::INFINITY;
                for (ci, vi) in c.coords().iter().zip(v.coords()) {
                    if *vi < 0.0 {
                        t = t.min(ci / -vi);
                    }
                }
                let sv: f64 = v.coords().iter().sum();
                if sv > 0.0 {
                    let sc: f64 = c.coords().iter().sum();
                    t = t.min((self.scale - sc) / sv);
                }
                t
            }
        };
        Ok(c.offset_by(&v, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn p(c: &[f64]) -> Point {
        Point::new(c).unwrap()
    }

    #[test]
    fn volumes_are_one() {
        for d in 2..=MAX_DIM {
            for body in [
                Body::ball(d).unwrap(),
                Body::cube(d).unwrap(),
                Body::simplex(d).unwrap(),
                Body::ellipsoid(&(1..=d).map(|i| i as f64).collect::<Vec<_>>()).unwrap(),
            ] {
                assert!((body.volume() - 1.0).abs() < 1e-12, "{body:?}");
            }
        }
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert!(Body::ball(1).is_err());
        assert!(Body::ball(7).is_err());
        assert!(Body::ellipsoid(&[1.0, -1.0]).is_err());
        assert!(Body::ellipsoid(&[1.0, 0.0]).is_err());
        assert!(Body::new(BodyKind::Ellipsoid, 3, &[1.0, 2.0]).is_err());
        assert!(Body::new(BodyKind::Cube, 2, &[1.0]).is_err());
    }

    #[test]
    fn membership() {
        let ball = Body::ball(2).unwrap();
        assert!(ball.contains(&p(&[0.0, 0.0])));
        assert!(!ball.contains(&p(&[1.0, 0.0])));
        assert!((ball.radius().unwrap() - PI.powf(-0.5)).abs() < 1e-15);
        let cube = Body::cube(3).unwrap();
        assert!(cube.contains(&p(&[0.5, 0.5, 0.5])));
        assert!(!cube.contains(&p(&[0.5, 1.5, 0.5])));
        assert!(!cube.contains(&p(&[0.5, 0.5])));
        let simplex = Body::simplex(2).unwrap();
        assert!(simplex.contains(&simplex.centroid()));
        assert!(!simplex.contains(&p(&[1.0, 1.0])));
    }

    #[test]
    fn support_values() {
        let ball = Body::ball(2).unwrap();
        let u = p(&[0.6, 0.8]);
        assert!((ball.support(&u).unwrap() - PI.powf(-0.5)).abs() < 1e-15);
        let cube = Body::cube(2).unwrap();
        assert_eq!(cube.support(&p(&[1.0, 0.0])).unwrap(), 1.0);
        let diag = p(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        assert!((cube.support(&diag).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(cube.support(&p(&[0.0, 0.0])).is_err());
        assert!(cube.support(&p(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn boundary_points_lie_on_boundary() {
        for body in [
            Body::ball(3).unwrap(),
            Body::cube(3).unwrap(),
            Body::simplex(3).unwrap(),
            Body::ellipsoid(&[1.0, 2.0, 0.5]).unwrap(),
        ] {
            for dir in [[1.0, 0.2, -0.3], [-1.0, -1.0, -1.0], [0.0, 0.0, 1.0]] {
                let b = body.boundary_point(&p(&dir)).unwrap();
                let c = body.centroid();
                let inside = c.offset_by(&b.sub(&c), 1.0 - 1e-9);
                let outside = c.offset_by(&b.sub(&c), 1.0 + 1e-9);
                assert!(body.contains(&inside), "{body:?} {dir:?}");
                assert!(!body.contains(&outside), "{body:?} {dir:?}");
            }
        }
    }

    #[test]
    fn polytope_skeletons() {
        let cube = Body::cube(3).unwrap();
        assert_eq!(cube.vertices().len(), 8);
        assert_eq!(cube.edges().len(), 12);
        let simplex = Body::simplex(4).unwrap();
        assert_eq!(simplex.vertices().len(), 5);
        assert_eq!(simplex.edges().len(), 10);
    }
}
