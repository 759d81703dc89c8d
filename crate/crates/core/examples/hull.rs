//! Incremental hulls: f-vectors, visibility and insertion deltas.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rpoly::sampling::sample_points;
use rpoly::{Body, Hull};

fn main() -> rpoly::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for d in 2..=4 {
        let body = Body::ball(d)?;
        for n in [100, 1000, 10000] {
            let hull = Hull::build(&sample_points(&body, n, &mut rng))?;
            println!(
                "d={d} n={n:>5}: missed volume {:.5}, f-vector {:?}, Euler sum {}",
                1.0 - hull.volume(),
                hull.f_vector(),
                hull.euler_characteristic()
            );
        }
    }

    // Grow a hull point by point and tally how often a new point lands
    // outside and how many vertices it sees.
    let body = Body::ball(2)?;
    let pts = sample_points(&body, 5000, &mut rng);
    let mut hull = Hull::build(&pts[..100])?;
    let (mut outside, mut seen) = (0, 0);
    for x in &pts[100..] {
        let delta = hull.insert(x)?;
        if !delta.is_zero() {
            outside += 1;
            seen += delta.visible_vertex_count;
        }
    }
    println!(
        "\n4900 insertions into a disk hull: {outside} landed outside, mean visible vertices {:.3}",
        seen as f64 / outside as f64
    );
    Ok(())
}
