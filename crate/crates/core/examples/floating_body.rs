//! Minimal caps, floating bodies, wet parts and visibility regions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rpoly::functionals::{epsilon_star, g_epsilon, minimal_cap_volume, wet_part_volume, FloatingBody};
use rpoly::{Body, Point};

fn main() -> rpoly::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let disk = Body::ball(2)?;
    let r = disk.radius().unwrap();
    println!("minimal cap volume along a radius of the disk:");
    for k in 0..=5 {
        let x = Point::new(&[r * k as f64 / 5.0, 0.0])?;
        println!("  |x| = {:.3} r  ->  {:.6}", k as f64 / 5.0, minimal_cap_volume(&disk, &x)?.volume);
    }

    let square = Body::cube(2)?;
    println!("\nwet-part volume rho(eps):");
    for eps in [1e-1, 1e-2, 1e-3] {
        let smooth = wet_part_volume(&disk, eps, 0, &mut rng)?;
        let poly = wet_part_volume(&square, eps, 4000, &mut rng)?;
        println!(
            "  eps = {eps:.0e}: disk {:.5} (exact), square {:.5} +- {:.5}",
            smooth.mean, poly.mean, poly.stderr
        );
    }

    for n in [1e3, 1e4, 1e5] {
        let eps = epsilon_star(n, 5.0)?;
        let floating = FloatingBody::new(&disk, eps)?;
        let g = g_epsilon(&disk, eps, 8, 20_000, &mut rng)?;
        println!(
            "n = {n:.0e}: eps* = {eps:.5}, relative radius of F {:.4}, g(eps*) = {:.5}",
            floating.relative_radius().unwrap(),
            g.value.mean
        );
    }
    Ok(())
}
