//! Wide points outside a random polytope and a cap cover of the wet part.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rpoly::functionals::{audit_cap_cover, build_cap_cover, wideness_profile};
use rpoly::sampling::sample_points;
use rpoly::{Body, Hull};

fn main() -> rpoly::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let disk = Body::ball(2)?;
    let n = 10_000;
    let hull = Hull::build(&sample_points(&disk, n, &mut rng))?;
    let profile = wideness_profile(&hull, &disk, 8, 200_000, &mut rng)?;
    println!("n = {n}: widest sampled point sees {} vertices", profile.max_wideness);
    for (k, v) in profile.volumes.iter().enumerate() {
        println!("  Vol(U_{}) = {:.3e} +- {:.1e}", k + 1, v.mean, v.stderr);
    }

    let cover = build_cap_cover(&disk, n, 5.0, None, &mut rng)?;
    let audit = audit_cap_cover(&cover, &disk, 200, 1000, &mut rng)?;
    println!(
        "\ncap cover: {} caps of volume {:.4e} (c1 = {:.3}, c2 = {:.3}); {} of {} audited points uncovered",
        cover.caps.len(),
        cover.cap_eps,
        cover.c1,
        cover.c2,
        audit.uncovered,
        audit.points
    );
    Ok(())
}
