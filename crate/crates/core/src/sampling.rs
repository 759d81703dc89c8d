//! Deterministic random streams and sampling in volume-one bodies.
//!
//! A stream is a ChaCha8 generator keyed by a master seed and selected by a
//! stream id through the cipher's stream parameter, so the generator for any
//! trial is available in constant time without touching any other trial.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson, StandardNormal};

use crate::geometry::{Body, BodyKind, Point};
use crate::{Error, Result};

/// Substream tag for the Poisson sample size, kept apart from the points so
/// that forcing `n' = n` reproduces the uniform model exactly.
const POISSON_COUNT_TAG: u64 = 0x9e37_79b9_7f4a_7c15;

/// A reproducible random stream identified by `(master_seed, stream_id)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
    master_seed: u64,
    stream_id: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        RngStream {
            rng,
            master_seed,
            stream_id,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// An independent stream tagged by `tag`, derived from this stream's
    /// identity (not its current position).
    pub fn substream(&self, tag: u64) -> RngStream {
        let seed = splitmix64(self.master_seed ^ splitmix64(tag.wrapping_add(0x5851_f42d_4c95_7f2d)));
        RngStream::new(seed, self.stream_id)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// A uniform direction on the unit sphere.
pub fn random_direction<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Point {
    loop {
        let g = Point::from_fn(d, |_| StandardNormal.sample(rng));
        if let Some(u) = g.normalized() {
            return u;
        }
    }
}

fn unit_ball_point<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Point {
    if d == 2 {
        let r = rng.random::<f64>().sqrt();
        let (s, c) = (std::f64::consts::TAU * rng.random::<f64>()).sin_cos();
        return Point::from_fn(2, |i| if i == 0 { r * c } else { r * s });
    }
    loop {
        let g = Point::from_fn(d, |_| StandardNormal.sample(rng));
        let n = g.norm();
        if n > 0.0 {
            let r = rng.random::<f64>().powf(1.0 / d as f64);
            return g.scale(r / n);
        }
    }
}

/// One uniform point in `body`, by a direct method for every body kind.
pub fn sample_uniform<R: Rng + ?Sized>(body: &Body, rng: &mut R) -> Point {
    let d = body.dim();
    let p = match body.kind() {
        BodyKind::Ball => unit_ball_point(d, rng).scale(body.scale()),
        BodyKind::Ellipsoid => {
            let u = unit_ball_point(d, rng);
            let a = body.semi_axes();
            Point::from_fn(d, |i| u[i] * a[i])
        }
        BodyKind::Cube => Point::from_fn(d, |_| rng.random::<f64>()),
        BodyKind::Simplex => {
            let mut e = [0.0f64; crate::MAX_DIM + 1];
            let mut total = 0.0;
            for v in e.iter_mut().take(d + 1) {
                *v = Exp1.sample(rng);
                total += *v;
            }
            let s = body.scale() / total;
            Point::from_fn(d, |i| e[i + 1] * s)
        }
    };
    debug_assert!(body.contains(&p));
    p
}

/// One uniform point by rejection from the bounding box; slower than
/// [`sample_uniform`] but independent of the body's parametrization.
pub fn sample_rejection<R: Rng + ?Sized>(body: &Body, rng: &mut R) -> Point {
    let (lo, hi) = body.bounding_box();
    loop {
        let p = Point::from_fn(body.dim(), |i| lo[i] + (hi[i] - lo[i]) * rng.random::<f64>());
        if body.contains(&p) {
            return p;
        }
    }
}

pub fn sample_points<R: Rng + ?Sized>(body: &Body, n: usize, rng: &mut R) -> Vec<Point> {
    (0..n).map(|_| sample_uniform(body, rng)).collect()
}

/// A Poisson variate with the given mean.
pub fn sample_poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u64> {
    let dist = Poisson::new(mean)
        .map_err(|_| Error::invalid(format!("Poisson mean must be positive and finite, got {mean}")))?;
    Ok(dist.sample(rng) as u64)
}

/// A sample of the Poisson model: the size is Poisson(`mean`), drawn from a
/// dedicated substream, and the points come from `rng` itself.
pub fn sample_poisson_model(body: &Body, mean: f64, rng: &mut RngStream) -> Result<Vec<Point>> {
    let mut count_rng = rng.substream(POISSON_COUNT_TAG);
    let n = sample_poisson_count(mean, &mut count_rng)?;
    Ok(sample_points(body, n as usize, rng))
}

/// The size that [`sample_poisson_model`] would draw for this stream.
pub fn poisson_model_count(mean: f64, rng: &RngStream) -> Result<u64> {
    sample_poisson_count(mean, &mut rng.substream(POISSON_COUNT_TAG))
}

/// `P` of size `n` and `Q` of size `n' - n`, drawn consecutively from one
/// stream so that `P' = P ∪ Q` is itself an `n'`-sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledPair {
    pub p: Vec<Point>,
    pub q: Vec<Point>,
}

impl CoupledPair {
    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn n_prime(&self) -> usize {
        self.p.len() + self.q.len()
    }

    pub fn p_prime(&self) -> Vec<Point> {
        let mut all = self.p.clone();
        all.extend_from_slice(&self.q);
        all
    }
}

pub fn coupled_pair<R: Rng + ?Sized>(
    body: &Body,
    n: usize,
    n_prime: usize,
    rng: &mut R,
) -> Result<CoupledPair> {
    if n_prime < n {
        return Err(Error::invalid(format!("n' = {n_prime} is smaller than n = {n}")));
    }
    if n < body.dim() + 1 {
        return Err(Error::invalid(format!(
            "n = {n} is too small to span dimension {}",
            body.dim()
        )));
    }
    let p = sample_points(body, n, rng);
    let q = sample_points(body, n_prime - n, rng);
    Ok(CoupledPair { p, q })
}
