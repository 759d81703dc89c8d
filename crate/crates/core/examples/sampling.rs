//! Reproducible random streams, the Poisson model and coupled samples.

use rand::Rng;
use rpoly::sampling::{coupled_pair, poisson_model_count, sample_poisson_model};
use rpoly::{Body, RngStream};

fn main() -> rpoly::Result<()> {
    let seed = 42;
    // Stream `id` of a master seed is fixed, so trial 7 can be replayed
    // without generating trials 0..7.
    let a: f64 = RngStream::new(seed, 7).random();
    let b: f64 = RngStream::new(seed, 7).random();
    println!("stream 7 replays: {a} == {b}");
    let sub: f64 = RngStream::new(seed, 7).substream(1).random();
    println!("its substream 1 is independent: {sub}");

    let body = Body::ball(2)?;
    let counts: Vec<u64> = (0..10)
        .map(|t| poisson_model_count(1000.0, &RngStream::new(seed, t)))
        .collect::<rpoly::Result<_>>()?;
    println!("Poisson(1000) sizes: {counts:?}");
    let mut rng = RngStream::new(seed, 0);
    let pts = sample_poisson_model(&body, 1000.0, &mut rng)?;
    println!("a Poisson-model sample has {} points", pts.len());

    let n = 1000;
    let m = rpoly::experiments::coupled_size(n, 4.0) - n;
    let pair = coupled_pair(&body, n, n + m, &mut RngStream::new(seed, 1))?;
    println!("coupled pair: |P| = {}, |P'| = {} (m = {m})", pair.n(), pair.n_prime());
    Ok(())
}
