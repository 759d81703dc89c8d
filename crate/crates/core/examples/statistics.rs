//! Moments, normality, tails and scaling fits on hull volumes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rpoly::sampling::sample_points;
use rpoly::stats::{default_lambda_grid, fit_power_law, fit_tail_rate, ks_distance_to_normal, tail_profile, Summary};
use rpoly::{Body, Hull};

fn main() -> rpoly::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let disk = Body::ball(2)?;
    let mut var_pairs = Vec::new();
    let mut last = Vec::new();
    for n in [250, 500, 1000, 2000, 4000] {
        let vols: Vec<f64> = (0..1000)
            .map(|_| Hull::build(&sample_points(&disk, n, &mut rng)).map(|h| h.volume()))
            .collect::<rpoly::Result<_>>()?;
        let s = Summary::of(&vols)?;
        println!(
            "n = {n:>4}: mean {:.6}, var {:.3e} +- {:.1e}, skew {:+.3}, KS {:.4}",
            s.mean,
            s.variance,
            s.variance_stderr,
            s.skewness,
            ks_distance_to_normal(&vols)?
        );
        var_pairs.push((n as f64, s.variance));
        last = vols;
    }
    let fit = fit_power_law(&var_pairs)?;
    println!("Var(Vol) ~ n^{:.3} (+- {:.3}); theory -5/3", fit.slope, fit.slope_stderr);

    let s = Summary::of(&last)?;
    let profile = tail_profile(&last, s.variance, &default_lambda_grid())?;
    match fit_tail_rate(&profile, 2.0) {
        Ok(rate) => println!("tail: P(|V - EV| >= sqrt(lambda Var)) ~ exp(-{:.3} lambda)", rate.c),
        Err(e) => println!("tail fit skipped: {e}"),
    }
    Ok(())
}
