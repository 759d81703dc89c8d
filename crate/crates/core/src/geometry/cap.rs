//! Caps `{y in K : u . y >= t}` and their volumes.

use serde::{Deserialize, Serialize};

use super::body::{unit_ball_volume, Body, BodyKind};
use super::point::Point;
use crate::hull::Hull;
use crate::{Error, Result};

/// A cap of a body: the points `y` with `direction . y >= offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    pub direction: Point,
    pub offset: f64,
    pub volume: f64,
}

impl Cap {
    pub fn contains(&self, y: &Point) -> bool {
        self.direction.dot(y) >= self.offset
    }
}

/// `int_0^phi sin^d(s) ds`
fn sin_power_integral(d: usize, phi: f64) -> f64 {
    if phi < 0.5 {
        // The recursion cancels badly for small angles; the integrand is a
        // smooth low-degree-like function there, so quadrature is exact to
        // rounding.
        let (nodes, weights) = gauss_legendre_20();
        let half = 0.5 * phi;
        return nodes
            .iter()
            .zip(weights)
            .map(|(x, w)| w * (half * (1.0 + x)).sin().powi(d as i32))
            .sum::<f64>()
            * half;
    }
    let (s, c) = phi.sin_cos();
    let mut even = phi;
    let mut odd = 1.0 - c;
    if d == 0 {
        return even;
    }
    if d == 1 {
        return odd;
    }
    for k in 2..=d {
        let kf = k as f64;
        let next_from = if k % 2 == 0 { even } else { odd };
        let v = -s.powi(k as i32 - 1) * c / kf + (kf - 1.0) / kf * next_from;
        if k % 2 == 0 {
            even = v;
        } else {
            odd = v;
        }
    }
    if d % 2 == 0 {
        even
    } else {
        odd
    }
}

/// Nodes and weights of the 20-point Gauss-Legendre rule on [-1, 1].
fn gauss_legendre_20() -> &'static ([f64; 20], [f64; 20]) {
    static RULE: std::sync::OnceLock<([f64; 20], [f64; 20])> = std::sync::OnceLock::new();
    RULE.get_or_init(|| {
        const N: usize = 20;
        let mut nodes = [0.0; N];
        let mut weights = [0.0; N];
        for i in 0..N {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=N {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

/// Fraction of the `d`-ball cut off by a hyperplane at signed distance
/// `h * radius` from the center.
pub fn ball_cap_fraction(d: usize, h: f64) -> f64 {
    if h >= 1.0 {
        return 0.0;
    }
    if h <= -1.0 {
        return 1.0;
    }
    if h < 0.0 {
        return 1.0 - ball_cap_fraction(d, -h);
    }
    let phi = h.acos();
    let ratio = unit_ball_volume(d - 1) / unit_ball_volume(d);
    (ratio * sin_power_integral(d, phi)).clamp(0.0, 0.5)
}

/// `Vol({y in K : u . y >= t})` for a unit vector `u`.
pub fn cap_volume(body: &Body, u: &Point, t: f64) -> Result<f64> {
    body.check_dim(u)?;
    super::check_unit(u)?;
    if !t.is_finite() {
        return Err(Error::invalid("cap offset must be finite"));
    }
    Ok(cap_volume_unchecked(body, u, t))
}

pub(crate) fn cap_volume_unchecked(body: &Body, u: &Point, t: f64) -> f64 {
    let d = body.dim();
    match body.kind() {
        BodyKind::Ball => ball_cap_fraction(d, t / body.scale()),
        BodyKind::Ellipsoid => {
            let stretched = body.support_unchecked(u);
            ball_cap_fraction(d, t / stretched)
        }
        BodyKind::Cube | BodyKind::Simplex => polytope_cap_volume(body, u, t),
    }
}

fn polytope_cap_volume(body: &Body, u: &Point, t: f64) -> f64 {
    let verts = body.vertices();
    let heights: Vec<f64> = verts.iter().map(|v| u.dot(v)).collect();
    let hi = heights.iter().fold(f64::NEG_INFINITY, |a, b| a.max(*b));
    let lo = heights.iter().fold(f64::INFINITY, |a, b| a.min(*b));
    if t >= hi {
        return 0.0;
    }
    if t <= lo {
        return 1.0;
    }
    match body.dim() {
        2 => return polygon_cap_area(&verts, &heights, body.kind(), t),
        3 => return polyhedron_cap_volume(&verts, &heights, body.kind(), u, t),
        _ => {}
    }
    clipped_hull_volume(body, &verts, &heights, t)
}

/// General-dimension route: hull of the kept vertices and the edge crossings.
fn clipped_hull_volume(body: &Body, verts: &[Point], heights: &[f64], t: f64) -> f64 {
    let mut kept: Vec<Point> = verts
        .iter()
        .zip(heights)
        .filter(|(_, h)| **h >= t)
        .map(|(v, _)| *v)
        .collect();
    for (a, b) in body.edges() {
        let (ha, hb) = (heights[a], heights[b]);
        if (ha > t && hb < t) || (ha < t && hb > t) {
            let s = (t - ha) / (hb - ha);
            kept.push(verts[a].offset_by(&verts[b].sub(&verts[a]), s));
        }
    }
    match Hull::build(&kept) {
        Ok(h) => h.volume().clamp(0.0, 1.0),
        Err(_) => 0.0,
    }
}

/// Boundary facets of the unit cube and the simplex in `d = 3` as vertex
/// cycles, indices into [`Body::vertices`].
const CUBE_FACES: [&[usize]; 6] = [&[0, 2, 6, 4], &[1, 3, 7, 5], &[0, 1, 5, 4], &[2, 3, 7, 6], &[0, 1, 3, 2], &[4, 5, 7, 6]];
const SIMPLEX_FACES: [&[usize]; 4] = [&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]];

/// Divergence theorem on the clipped solid, with volumes taken relative to
/// the point `t u` on the cutting plane so that the cut face contributes
/// nothing: `V = 1/3 sum_F (p_F - t u) . A_F` over the clipped boundary
/// facets `F` with outward area vectors `A_F`.
fn polyhedron_cap_volume(verts: &[Point], heights: &[f64], kind: BodyKind, u: &Point, t: f64) -> f64 {
    let faces: &[&[usize]] = match kind {
        BodyKind::Cube => &CUBE_FACES,
        _ => &SIMPLEX_FACES,
    };
    let c = u.scale(t);
    let centroid = verts.iter().fold(Point::origin(3), |a, v| a.add(v)).scale(1.0 / verts.len() as f64);
    let mut total = 0.0;
    let mut clipped: Vec<Point> = Vec::with_capacity(8);
    for face in faces {
        let full = area_vector(face.iter().map(|&i| verts[i]));
        let outward = if full.dot(&verts[face[0]].sub(&centroid)) >= 0.0 { 1.0 } else { -1.0 };
        clipped.clear();
        for (k, &i) in face.iter().enumerate() {
            let j = face[(k + 1) % face.len()];
            let (hi, hj) = (heights[i], heights[j]);
            if hi >= t {
                clipped.push(verts[i]);
            }
            if (hi >= t) != (hj >= t) {
                clipped.push(verts[i].offset_by(&verts[j].sub(&verts[i]), (t - hi) / (hj - hi)));
            }
        }
        if clipped.len() >= 3 {
            let a = area_vector(clipped.iter().copied());
            total += outward * clipped[0].sub(&c).dot(&a);
        }
    }
    (total / 3.0).clamp(0.0, 1.0)
}

/// `1/2 sum p_k x p_(k+1)` over a closed planar polygon in `R^3`.
fn area_vector(points: impl Iterator<Item = Point>) -> Point {
    let pts: Vec<Point> = points.collect();
    let mut a = [0.0f64; 3];
    for k in 0..pts.len() {
        let (p, q) = (&pts[k], &pts[(k + 1) % pts.len()]);
        a[0] += p[1] * q[2] - p[2] * q[1];
        a[1] += p[2] * q[0] - p[0] * q[2];
        a[2] += p[0] * q[1] - p[1] * q[0];
    }
    Point::from_fn(3, |i| 0.5 * a[i])
}

/// Sutherland-Hodgman clip of a convex polygon against `u . y >= t`,
/// followed by the shoelace formula.
fn polygon_cap_area(verts: &[Point], heights: &[f64], kind: BodyKind, t: f64) -> f64 {
    // Counter-clockwise vertex order for the two polygons.
    let order: &[usize] = match kind {
        BodyKind::Cube => &[0, 1, 3, 2],
        _ => &[0, 1, 2],
    };
    let mut clipped: Vec<(f64, f64)> = Vec::with_capacity(6);
    for (k, &i) in order.iter().enumerate() {
        let j = order[(k + 1) % order.len()];
        let (hi, hj) = (heights[i], heights[j]);
        if hi >= t {
            clipped.push((verts[i][0], verts[i][1]));
        }
        if (hi >= t) != (hj >= t) {
            let s = (t - hi) / (hj - hi);
            clipped.push((
                verts[i][0] + s * (verts[j][0] - verts[i][0]),
                verts[i][1] + s * (verts[j][1] - verts[i][1]),
            ));
        }
    }
    let n = clipped.len();
    let twice: f64 = (0..n)
        .map(|k| {
            let (x0, y0) = clipped[k];
            let (x1, y1) = clipped[(k + 1) % n];
            x0 * y1 - x1 * y0
        })
        .sum();
    (0.5 * twice).clamp(0.0, 1.0)
}

/// Finds the cap in direction `u` whose volume is `eps` by bisection on the
/// offset over `[-h(-u), h(u)]`.
pub fn cap_for_volume(body: &Body, u: &Point, eps: f64) -> Result<Cap> {
    body.check_dim(u)?;
    super::check_unit(u)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("cap volume {eps} outside (0, 1)")));
    }
    Ok(cap_for_volume_unchecked(body, u, eps))
}

pub(crate) fn cap_for_volume_unchecked(body: &Body, u: &Point, eps: f64) -> Cap {
    let mut hi = body.support_unchecked(u);
    let mut lo = -body.support_unchecked(&u.scale(-1.0));
    if matches!(body.kind(), BodyKind::Ball | BodyKind::Ellipsoid) {
        let h = ball_offset_for_fraction(body.dim(), eps) * hi;
        return Cap {
            direction: *u,
            offset: h,
            volume: cap_volume_unchecked(body, u, h),
        };
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cap_volume_unchecked(body, u, mid) > eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (vlo, vhi) = (
        cap_volume_unchecked(body, u, lo),
        cap_volume_unchecked(body, u, hi),
    );
    let (offset, volume) = if (vlo - eps).abs() <= (vhi - eps).abs() {
        (lo, vlo)
    } else {
        (hi, vhi)
    };
    Cap {
        direction: *u,
        offset,
        volume,
    }
}

/// Relative offset `h` in `[-1, 1]` with `ball_cap_fraction(d, h) = frac`.
pub(crate) fn ball_offset_for_fraction(d: usize, frac: f64) -> f64 {
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ball_cap_fraction(d, mid) > frac {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (ball_cap_fraction(d, lo) - frac).abs() <= (ball_cap_fraction(d, hi) - frac).abs() {
        lo
    } else {
        hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn p(c: &[f64]) -> Point {
        Point::new(c).unwrap()
    }

    /// Circular segment area of a disk of radius `r` at distance `rho`.
    fn segment(r: f64, rho: f64) -> f64 {
        r * r * (rho / r).acos() - rho * (r * r - rho * rho).sqrt()
    }

    #[test]
    fn disk_caps_match_segment_formula() {
        let ball = Body::ball(2).unwrap();
        let r = ball.radius().unwrap();
        let u = p(&[0.6, -0.8]);
        assert!((cap_volume(&ball, &u, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(cap_volume(&ball, &u, r).unwrap(), 0.0);
        let half = cap_volume(&ball, &u, r / 2.0).unwrap();
        assert!((half - segment(r, r / 2.0)).abs() < 1e-14);
        assert!((half - 0.19550).abs() < 5e-6);
        for k in 0..200 {
            let rho = r * k as f64 / 200.0;
            let v = cap_volume(&ball, &u, rho).unwrap();
            assert!((v - segment(r, rho)).abs() < 1e-13, "rho {rho}");
        }
    }

    #[test]
    fn three_ball_cap_matches_spherical_cap() {
        let ball = Body::ball(3).unwrap();
        let r = ball.radius().unwrap();
        for k in 0..50 {
            let h = r * k as f64 / 50.0;
            let depth = r - h;
            let exact = PI * depth * depth * (3.0 * r - depth) / 3.0;
            let v = cap_volume(&ball, &p(&[0.0, 0.0, 1.0]), h).unwrap();
            assert!((v - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn ball_fraction_series_branch_is_continuous() {
        for d in 2..=6 {
            let phi = 0.5f64;
            let below = sin_power_integral(d, phi * (1.0 - 1e-15));
            let above = sin_power_integral(d, phi * (1.0 + 1e-15));
            assert!((below - above).abs() < 1e-12 * below, "d={d}");
            // Small-angle limit: phi^(d+1) / (d+1).
            let tiny = 1e-4f64;
            let lead = tiny.powi(d as i32 + 1) / (d as f64 + 1.0);
            assert!((sin_power_integral(d, tiny) / lead - 1.0).abs() < 1e-7);
            assert!((ball_cap_fraction(d, 0.0) - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn square_caps() {
        let sq = Body::cube(2).unwrap();
        let cap = cap_for_volume(&sq, &p(&[1.0, 0.0]), 0.25).unwrap();
        assert!((cap.offset - 0.75).abs() < 1e-12);
        let diag = p(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        // Corner triangle with legs a has area a^2 / 2.
        let a: f64 = 0.3;
        let t = (2.0 - a) * FRAC_1_SQRT_2;
        assert!((cap_volume(&sq, &diag, t).unwrap() - a * a / 2.0).abs() < 1e-14);
        assert_eq!(cap_volume(&sq, &diag, 2.0).unwrap(), 0.0);
        assert_eq!(cap_volume(&sq, &diag, -0.1).unwrap(), 1.0);
    }

    #[test]
    fn cube_slab_and_corner_in_3d() {
        let cube = Body::cube(3).unwrap();
        let v = cap_volume(&cube, &p(&[0.0, 1.0, 0.0]), 0.3).unwrap();
        assert!((v - 0.7).abs() < 1e-13);
        let u = p(&[1.0, 1.0, 1.0]).normalized().unwrap();
        // Corner tetrahedron with legs a: a^3 / 6.
        let a: f64 = 0.4;
        let t = (3.0 - a) / 3f64.sqrt();
        let v = cap_volume(&cube, &u, t).unwrap();
        assert!((v - a.powi(3) / 6.0).abs() < 1e-13);
        // Central cut through the symmetric direction halves the cube.
        let v = cap_volume(&cube, &u, 1.5 / 3f64.sqrt()).unwrap();
        assert!((v - 0.5).abs() < 1e-13);
    }

    #[test]
    fn simplex_corner_caps() {
        for d in 2..=5 {
            let body = Body::simplex(d).unwrap();
            let s = body.scale();
            // Cutting near the origin vertex along -e_1 - ... keeps a scaled copy.
            let u = Point::from_fn(d, |_| -1.0).normalized().unwrap();
            let frac: f64 = 0.3;
            let t = -frac * s / (d as f64).sqrt();
            let v = cap_volume(&body, &u, t).unwrap();
            assert!((v - frac.powi(d as i32)).abs() < 1e-12, "d={d} v={v}");
        }
    }

    #[test]
    fn solid_caps_agree_with_hull_clipping() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for body in [Body::cube(3).unwrap(), Body::simplex(3).unwrap()] {
            let verts = body.vertices();
            for _ in 0..300 {
                let u = crate::sampling::random_direction(3, &mut rng);
                let heights: Vec<f64> = verts.iter().map(|v| u.dot(v)).collect();
                let lo = heights.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = heights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let t = lo + (hi - lo) * rng.random::<f64>();
                let fast = cap_volume(&body, &u, t).unwrap();
                let slow = clipped_hull_volume(&body, &verts, &heights, t);
                assert!((fast - slow).abs() < 1e-12, "{:?} t={t}: {fast} vs {slow}", body.kind());
            }
        }
    }

    #[test]
    fn non_unit_direction_rejected() {
        let ball = Body::ball(2).unwrap();
        assert!(cap_volume(&ball, &p(&[1.0, 1.0]), 0.0).is_err());
        assert!(cap_for_volume(&ball, &p(&[1.0, 0.0]), 0.0).is_err());
        assert!(cap_for_volume(&ball, &p(&[1.0, 0.0]), 1.0).is_err());
    }

    #[test]
    fn ellipsoid_caps_reduce_to_ball() {
        let e = Body::ellipsoid(&[2.0, 0.5]).unwrap();
        let u = p(&[0.6, 0.8]);
        assert!((cap_volume(&e, &u, 0.0).unwrap() - 0.5).abs() < 1e-15);
        let h = e.support(&u).unwrap();
        assert_eq!(cap_volume(&e, &u, h).unwrap(), 0.0);
        let c = cap_for_volume(&e, &u, 0.1).unwrap();
        assert!((c.volume - 0.1).abs() < 1e-12);
    }
}
