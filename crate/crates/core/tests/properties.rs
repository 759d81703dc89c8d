//! Cross-module properties against independent oracles.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rpoly::functionals::{minimal_cap_volume_search, FloatingBody};
use rpoly::geometry::ball_cap_fraction;
use rpoly::sampling::{coupled_pair, sample_points, sample_poisson_count, RngStream};
use rpoly::stats::{ks_critical_value, ks_two_sample};
use rpoly::{Body, Hull};

fn body(kind: u8, d: usize) -> Body {
    match kind % 4 {
        0 => Body::ball(d).unwrap(),
        1 => Body::cube(d).unwrap(),
        2 => Body::simplex(d).unwrap(),
        _ => Body::ellipsoid(&(0..d).map(|i| 0.5 + i as f64).collect::<Vec<_>>()).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn hull_equals_brute_force(seed in any::<u64>(), d in 2usize..=4, kind in 0u8..4, extra in 1usize..20) {
        let b = body(kind, d);
        let pts = sample_points(&b, d + 1 + extra, &mut ChaCha8Rng::seed_from_u64(seed));
        let fast = Hull::build(&pts).unwrap();
        let slow = Hull::brute_force(&pts).unwrap();
        prop_assert_eq!(fast.facet_label_sets(), slow.facet_label_sets());
        prop_assert!((fast.volume() - slow.volume()).abs() <= 1e-12);
        prop_assert_eq!(fast.euler_characteristic(), 1 - if d % 2 == 0 { 1 } else { -1 });
    }

    #[test]
    fn insertion_order_does_not_change_the_hull(seed in any::<u64>(), d in 2usize..=3, n in 8usize..60) {
        let b = Body::ball(d).unwrap();
        let pts = sample_points(&b, n, &mut ChaCha8Rng::seed_from_u64(seed));
        let whole = Hull::build(&pts).unwrap();
        let mut grown = Hull::build(&pts[..d + 1]).unwrap();
        let mut gained = grown.volume();
        for x in &pts[d + 1..] {
            gained += grown.insert(x).unwrap().volume_gain;
        }
        prop_assert_eq!(grown.f_vector(), whole.f_vector());
        prop_assert!((grown.volume() - whole.volume()).abs() < 1e-12);
        prop_assert!((gained - whole.volume()).abs() < 1e-12);
    }
}

#[test]
fn grid_membership_agrees_with_radial_formula() {
    let disk = Body::ball(2).unwrap();
    let r = disk.radius().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for eps in [0.01, 0.1] {
        let oracle = FloatingBody::new(&disk, eps).unwrap();
        let mut disagreements = 0;
        for _ in 0..10_000 {
            let x = sample_points(&disk, 1, &mut rng).pop().unwrap();
            // Exact: the minimal cap through x is the segment cut by the
            // chord orthogonal to x.
            let exact = ball_cap_fraction(2, x.norm() / r);
            let grid = minimal_cap_volume_search(&disk, &x, 4096).unwrap();
            if (exact - eps).abs() > 1e-9 && (grid.volume >= eps) != oracle.contains(&x).unwrap() {
                disagreements += 1;
            }
            assert!((grid.volume - exact).abs() < 1e-9, "{} vs {exact}", grid.volume);
        }
        assert_eq!(disagreements, 0, "eps = {eps}");
    }
}

#[test]
fn coupled_superset_is_a_sample_of_the_larger_size() {
    let disk = Body::ball(2).unwrap();
    let (n, n_prime, trials) = (200, 300, 3000);
    let coupled: Vec<f64> = (0..trials)
        .map(|t| {
            let pair = coupled_pair(&disk, n, n_prime, &mut RngStream::new(1, t)).unwrap();
            Hull::build(&pair.p_prime()).unwrap().volume()
        })
        .collect();
    let direct: Vec<f64> = (0..trials)
        .map(|t| Hull::build(&sample_points(&disk, n_prime, &mut RngStream::new(2, t))).unwrap().volume())
        .collect();
    let smaller: Vec<f64> = (0..trials)
        .map(|t| Hull::build(&sample_points(&disk, n, &mut RngStream::new(3, t))).unwrap().volume())
        .collect();
    let crit = ks_critical_value(trials as usize, trials as usize, 0.01);
    assert!(ks_two_sample(&coupled, &direct).unwrap() < crit);
    // The test has power: the n-sample is clearly distinguishable.
    assert!(ks_two_sample(&smaller, &direct).unwrap() > crit);
}

#[test]
fn poisson_counts_have_equal_mean_and_variance() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mean = 1000.0;
    let xs: Vec<f64> = (0..20_000).map(|_| sample_poisson_count(mean, &mut rng).unwrap() as f64).collect();
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64;
    assert!((m - mean).abs() < 4.0 * (mean / xs.len() as f64).sqrt());
    // Var of the sample variance of a Poisson(1000) is about 2 mean^2 / N.
    assert!((v - mean).abs() < 4.0 * (2.0 * mean * mean / xs.len() as f64).sqrt());
}
