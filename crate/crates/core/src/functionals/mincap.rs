use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::geometry::{ball_cap_fraction, Body, BodyKind, Cap, Point};
use crate::{Error, Result};

/// Directions examined by the grid search for non-smooth bodies.
pub const DEFAULT_DIRECTIONS: usize = 4096;

/// The smallest cap containing a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimalCap {
    pub volume: f64,
    pub cap: Cap,
    /// Angular spacing of the direction grid that produced the result; zero
    /// for closed forms.
    pub resolution: f64,
}

/// Coordinates of `x` in the unit ball that a ball or ellipsoid is the
/// axis-aligned image of.
pub(crate) fn to_unit_ball(body: &Body, x: &Point) -> Point {
    let a = body.semi_axes();
    Point::from_fn(body.dim(), |i| x[i] / a[i])
}

pub(crate) fn from_unit_ball(body: &Body, y: &Point) -> Point {
    let a = body.semi_axes();
    Point::from_fn(body.dim(), |i| y[i] * a[i])
}

/// The body-space cap `{z : v . T^{-1} z >= h}` for a unit direction `v` in
/// unit-ball coordinates.
pub(crate) fn cap_from_unit_ball(body: &Body, v: &Point, h: f64) -> Cap {
    let a = body.semi_axes();
    let w = Point::from_fn(body.dim(), |i| v[i] / a[i]);
    let norm = w.norm();
    Cap {
        direction: w.scale(1.0 / norm),
        offset: h / norm,
        volume: ball_cap_fraction(body.dim(), h),
    }
}

fn check_inside(body: &Body, x: &Point) -> Result<()> {
    body.check_dim(x)?;
    if !body.contains(x) {
        return Err(Error::invalid(format!("point {x:?} lies outside the body")));
    }
    Ok(())
}

/// `min_u Vol({y in K : u . y >= u . x})`.
pub fn minimal_cap_volume(body: &Body, x: &Point) -> Result<MinimalCap> {
    check_inside(body, x)?;
    if body.is_smooth() {
        return Ok(smooth_minimal_cap(body, x));
    }
    Ok(search(body, x, DEFAULT_DIRECTIONS, None))
}

/// Grid search with local refinement, available for every body (the smooth
/// bodies use it only when asked explicitly, e.g. to cross-check the closed
/// form).
pub fn minimal_cap_volume_search(body: &Body, x: &Point, directions: usize) -> Result<MinimalCap> {
    check_inside(body, x)?;
    if directions < 8 {
        return Err(Error::invalid("direction search needs at least 8 directions"));
    }
    Ok(search(body, x, directions, None))
}

pub(crate) fn smooth_minimal_cap(body: &Body, x: &Point) -> MinimalCap {
    let y = to_unit_ball(body, x);
    let rho = y.norm().min(1.0);
    let v = y.normalized().unwrap_or_else(|| Point::basis(body.dim(), 0));
    let cap = cap_from_unit_ball(body, &v, rho);
    MinimalCap {
        volume: cap.volume,
        cap,
        resolution: 0.0,
    }
}

/// Quasi-uniform unit directions: equally spaced angles in the plane, a
/// Fibonacci lattice on the 2-sphere and a fixed pseudo-random set above.
/// Returns the directions and their nominal angular spacing.
pub fn direction_grid(d: usize, n: usize) -> (Vec<Point>, f64) {
    match d {
        2 => {
            let step = std::f64::consts::TAU / n as f64;
            let dirs = (0..n)
                .map(|k| {
                    let (s, c) = (k as f64 * step).sin_cos();
                    Point::from_fn(2, |i| if i == 0 { c } else { s })
                })
                .collect();
            (dirs, step)
        }
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            let dirs = (0..n)
                .map(|k| {
                    let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let (s, c) = (k as f64 * golden).sin_cos();
                    Point::from_fn(3, |i| [r * c, r * s, z][i])
                })
                .collect();
            (dirs, (4.0 * std::f64::consts::PI / n as f64).sqrt())
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d1ec + d as u64);
            let dirs = (0..n)
                .map(|_| loop {
                    let g = Point::from_fn(d, |_| StandardNormal.sample(&mut rng));
                    if let Some(u) = g.normalized() {
                        break u;
                    }
                })
                .collect();
            let area = 2.0 * std::f64::consts::PI.powf(d as f64 / 2.0) / libm::tgamma(d as f64 / 2.0);
            (dirs, (area / n as f64).powf(1.0 / (d as f64 - 1.0)))
        }
    }
}

/// Extra candidate directions for polytopes: facet normals and the
/// directions from `x` toward each vertex.
fn polytope_candidates(body: &Body, x: &Point) -> Vec<Point> {
    let d = body.dim();
    let mut out = Vec::new();
    for i in 0..d {
        out.push(Point::basis(d, i));
        out.push(Point::basis(d, i).scale(-1.0));
    }
    let diag = Point::from_fn(d, |_| 1.0 / (d as f64).sqrt());
    out.push(diag);
    out.push(diag.scale(-1.0));
    let c = body.centroid();
    for v in body.vertices() {
        if let Some(u) = v.sub(x).normalized() {
            out.push(u);
        }
        if let Some(u) = v.sub(&c).normalized() {
            out.push(u);
        }
    }
    out
}

/// An orthonormal basis of the tangent space at the unit vector `u`.
fn tangent_basis(u: &Point) -> Vec<Point> {
    let d = u.dim();
    let mut basis: Vec<Point> = Vec::with_capacity(d - 1);
    for i in 0..d {
        let mut t = Point::basis(d, i);
        t = t.offset_by(u, -t.dot(u));
        for b in &basis {
            let c = t.dot(b);
            t = t.offset_by(b, -c);
        }
        if let Some(n) = t.normalized() {
            if t.norm() > 1e-6 {
                basis.push(n);
            }
        }
        if basis.len() == d - 1 {
            break;
        }
    }
    basis
}

fn cap_through(body: &Body, u: &Point, x: &Point) -> f64 {
    crate::geometry::cap_volume_unchecked(body, u, u.dot(x))
}

/// Grid search plus pattern-search refinement of the best few directions.
/// With `stop_below`, returns as soon as a cap smaller than the threshold is
/// found.
pub(crate) fn search(body: &Body, x: &Point, directions: usize, stop_below: Option<f64>) -> MinimalCap {
    let d = body.dim();
    let (mut dirs, resolution) = direction_grid(d, directions);
    if !body.is_smooth() {
        dirs.extend(polytope_candidates(body, x));
    }
    let mut scored: Vec<(f64, Point)> = Vec::with_capacity(dirs.len());
    for u in dirs {
        let v = cap_through(body, &u, x);
        if let Some(t) = stop_below {
            if v < t {
                return finish(x, u, v, resolution);
            }
        }
        scored.push((v, u));
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = scored[0];
    for &(v0, u0) in scored.iter().take(4) {
        let (v, u) = refine(body, x, u0, v0, resolution);
        if v < best.0 {
            best = (v, u);
        }
        if let Some(t) = stop_below {
            if best.0 < t {
                break;
            }
        }
    }
    finish(x, best.1, best.0, resolution)
}

fn finish(x: &Point, u: Point, v: f64, resolution: f64) -> MinimalCap {
    MinimalCap {
        volume: v,
        cap: Cap {
            direction: u,
            offset: u.dot(x),
            volume: v,
        },
        resolution,
    }
}

fn refine(body: &Body, x: &Point, mut u: Point, mut v: f64, start: f64) -> (f64, Point) {
    let mut step = start;
    let mut evals = 0;
    while step > 1e-9 && evals < 400 {
        let mut improved = false;
        for t in tangent_basis(&u) {
            for sgn in [1.0, -1.0] {
                let Some(cand) = u.offset_by(&t, sgn * step).normalized() else {
                    continue;
                };
                evals += 1;
                let cv = cap_through(body, &cand, x);
                if cv < v {
                    u = cand;
                    v = cv;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (v, u)
}

/// Minimal cap volume through `x` in a body known to contain it; the exact
/// path for smooth bodies, the grid search otherwise.
pub(crate) fn minimal_cap_unchecked(body: &Body, x: &Point, directions: usize) -> MinimalCap {
    match body.kind() {
        BodyKind::Ball | BodyKind::Ellipsoid => smooth_minimal_cap(body, x),
        _ => search(body, x, directions, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Point {
        Point::new(c).unwrap()
    }

    fn segment(r: f64, rho: f64) -> f64 {
        r * r * (rho / r).acos() - rho * (r * r - rho * rho).sqrt()
    }

    #[test]
    fn disk_examples() {
        let b = Body::ball(2).unwrap();
        let r = b.radius().unwrap();
        assert!((minimal_cap_volume(&b, &Point::origin(2)).unwrap().volume - 0.5).abs() < 1e-15);
        assert!(minimal_cap_volume(&b, &p(&[r, 0.0])).unwrap().volume.abs() < 1e-15);
        let half = minimal_cap_volume(&b, &p(&[0.0, r / 2.0])).unwrap();
        assert!((half.volume - segment(r, r / 2.0)).abs() < 1e-12);
        assert!((half.volume - 0.19550).abs() < 5e-6);
        assert!(half.cap.contains(&p(&[0.0, r / 2.0])));
        assert!(minimal_cap_volume(&b, &p(&[r, r])).is_err());
    }

    #[test]
    fn ellipsoid_cap_is_minimal_among_grid() {
        let b = Body::ellipsoid(&[2.0, 0.5, 1.0]).unwrap();
        let a = b.semi_axes().to_vec();
        let x = p(&[0.4 * a[0], -0.3 * a[1], 0.5 * a[2]]);
        let exact = minimal_cap_volume(&b, &x).unwrap();
        assert!((exact.cap.volume - crate::geometry::cap_volume(&b, &exact.cap.direction, exact.cap.offset).unwrap()).abs() < 1e-12);
        assert!((exact.cap.offset - exact.cap.direction.dot(&x)).abs() < 1e-12);
        let grid = minimal_cap_volume_search(&b, &x, 2000).unwrap();
        assert!(grid.volume >= exact.volume - 1e-12);
        assert!(grid.volume - exact.volume < 1e-7, "{} {}", grid.volume, exact.volume);
    }

    #[test]
    fn square_minimal_caps() {
        let b = Body::cube(2).unwrap();
        // Center: any halving line; minimum 1/2.
        let c = minimal_cap_volume(&b, &p(&[0.5, 0.5])).unwrap();
        assert!((c.volume - 0.5).abs() < 1e-9);
        // Near a corner along the diagonal the corner triangle wins:
        // x = (t, t) -> triangle with legs 2t, area 2 t^2.
        let t = 0.1;
        let m = minimal_cap_volume(&b, &p(&[t, t])).unwrap();
        assert!((m.volume - 2.0 * t * t).abs() < 1e-9, "{}", m.volume);
        // Near an edge midpoint the strip wins.
        let e = minimal_cap_volume(&b, &p(&[0.5, 0.05])).unwrap();
        assert!((e.volume - 0.05).abs() < 1e-9);
        // Boundary point.
        assert!(minimal_cap_volume(&b, &p(&[0.3, 0.0])).unwrap().volume < 1e-12);
    }

    #[test]
    fn cube_corner_in_three_dimensions() {
        let b = Body::cube(3).unwrap();
        // x = (t,t,t): the corner simplex with legs 3t has volume 4.5 t^3.
        let t = 0.05;
        let m = minimal_cap_volume(&b, &p(&[t, t, t])).unwrap();
        assert!((m.volume - 4.5 * t * t * t).abs() < 1e-9, "{}", m.volume);
    }

    #[test]
    fn grid_agrees_with_radial_form_on_the_disk() {
        let b = Body::ball(2).unwrap();
        for k in 0..50 {
            let ang = k as f64 * 0.37;
            let r = b.radius().unwrap() * (k as f64 / 50.0);
            let x = p(&[r * ang.cos(), r * ang.sin()]);
            let exact = minimal_cap_volume(&b, &x).unwrap().volume;
            let grid = minimal_cap_volume_search(&b, &x, 1024).unwrap().volume;
            assert!((grid - exact).abs() < 1e-9, "{grid} {exact}");
        }
    }

    #[test]
    fn grids_are_unit_and_cover() {
        for d in 2..=5 {
            let (dirs, res) = direction_grid(d, 512);
            assert_eq!(dirs.len(), 512);
            assert!(dirs.iter().all(|u| (u.norm() - 1.0).abs() < 1e-12));
            assert!(res > 0.0);
        }
    }
}
