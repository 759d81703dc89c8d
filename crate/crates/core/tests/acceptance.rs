//! Acceptance checks at full scale. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any criterion fails.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rpoly::experiments::{self, Details, ExperimentConfig, Report};
use rpoly::functionals::minimal_cap_volume;
use rpoly::geometry::{cap_for_volume, cap_volume};
use rpoly::sampling::{random_direction, sample_points};
use rpoly::stats::chernoff_bound;
use rpoly::{Body, Hull, Point};

const VAR_GRID: &str = "[200, 400, 800, 1600, 3200, 6400, 12800]";

struct Outcome {
    pass: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            lines: Vec::new(),
        }
    }

    /// Records one condition and its measured values.
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.pass &= ok;
        self.lines.push(format!("{} {}", if ok { "ok  " } else { "FAIL" }, what.into()));
    }
}

fn workers() -> usize {
    experiments::default_workers()
}

fn run_json(json: &str, workers: usize) -> Report {
    let cfg = ExperimentConfig::from_json(json).expect("acceptance config is valid");
    let report = experiments::run(&cfg, workers).expect("experiment runs");
    assert_eq!(report.failed_trials, 0, "failed trials: {:?}", report.errors);
    report
}

fn slope(report: &Report, name: &str) -> (f64, f64) {
    let f = report.fit(name).unwrap_or_else(|| panic!("fit {name} missing"));
    (f.slope, f.slope_stderr)
}

fn body_for(kind: usize, d: usize) -> Body {
    match kind {
        0 => Body::ball(d).unwrap(),
        1 => Body::cube(d).unwrap(),
        2 => Body::simplex(d).unwrap(),
        _ => {
            let axes: Vec<f64> = (0..d).map(|i| 1.0 + 0.5 * i as f64).collect();
            Body::ellipsoid(&axes).unwrap()
        }
    }
}

fn hull_oracle() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let (mut facet_mismatch, mut vol_err, mut euler_bad, mut invalid) = (0, 0.0f64, 0, 0);
    let instances = 500;
    for i in 0..instances {
        let d = 2 + i % 3;
        let body = body_for((i / 3) % 4, d);
        let n = rng.random_range(d + 2..=30);
        let pts = sample_points(&body, n, &mut rng);
        let fast = Hull::build(&pts).unwrap();
        let slow = Hull::brute_force(&pts).unwrap();
        if fast.facet_label_sets() != slow.facet_label_sets() {
            facet_mismatch += 1;
        }
        vol_err = vol_err.max((fast.volume() - slow.volume()).abs());
        let euler = 1 - if d % 2 == 0 { 1 } else { -1 };
        if fast.euler_characteristic() != euler || slow.euler_characteristic() != euler {
            euler_bad += 1;
        }
        if fast.validate().is_err() {
            invalid += 1;
        }
    }
    out.check(facet_mismatch == 0, format!("facet sets differ in {facet_mismatch}/{instances} instances"));
    out.check(vol_err <= 1e-9, format!("max volume difference {vol_err:.3e} (<= 1e-9)"));
    out.check(euler_bad == 0, format!("Euler relation violated in {euler_bad} hulls"));
    out.check(invalid == 0, format!("structural check failed in {invalid} hulls"));
    out
}

fn slope_within(out: &mut Outcome, label: &str, got: (f64, f64), target: f64, tol: f64) {
    out.check(
        (got.0 - target).abs() <= tol,
        format!("{label}: slope {:.4} +- {:.4}, target {target:.4} +- {tol}", got.0, got.1),
    );
}

fn variance_exponents(w: usize) -> Outcome {
    let mut out = Outcome::new();
    for (d, functional, target, tol) in [
        (2, "volume", -5.0 / 3.0, 0.10),
        (2, "f0", 1.0 / 3.0, 0.10),
        (3, "volume", -1.5, 0.12),
    ] {
        let r = run_json(
            &format!(
                r#"{{"experiment":"variance_scaling","body":"ball","dim":{d},"n_grid":{VAR_GRID},
                "trials":2000,"master_seed":2,"functional":"{functional}"}}"#
            ),
            w,
        );
        slope_within(&mut out, &format!("d={d} Var({functional})"), slope(&r, "variance"), target, tol);
    }
    out
}

fn expectation_exponents(w: usize) -> Outcome {
    let mut out = Outcome::new();
    for (functional, target) in [("volume", -2.0 / 3.0), ("f0", 1.0 / 3.0)] {
        let r = run_json(
            &format!(
                r#"{{"experiment":"expectation","body":"ball","dim":2,"n_grid":{VAR_GRID},
                "trials":2000,"master_seed":3,"functional":"{functional}"}}"#
            ),
            w,
        );
        let label = if functional == "volume" { "E[1-Vol]" } else { "E[f0]" };
        slope_within(&mut out, label, slope(&r, "mean"), target, 0.05);
    }
    let r = run_json(
        r#"{"experiment":"expectation","body":"ball","dim":2,"n_grid":[500],"trials":10000,"master_seed":4}"#,
        w,
    );
    let Details::Expectation(det) = &r.details else { panic!("wrong details") };
    let e = &det.efron[0];
    out.check(
        e.z.abs() <= 3.0,
        format!(
            "Efron at n=500: E f0 = {:.4}, n E[1-Vol(K_(n-1))] = {:.4}, paired z = {:.3} (|z| <= 3)",
            e.f0.mean, e.efron.mean, e.z
        ),
    );
    out
}

fn clt_trend(w: usize) -> Outcome {
    let mut out = Outcome::new();
    for functional in ["volume", "f0"] {
        let r = run_json(
            &format!(
                r#"{{"experiment":"clt","body":"ball","dim":2,"n_grid":[100,1000,10000],
                "trials":5000,"master_seed":5,"functional":"{functional}"}}"#
            ),
            w,
        );
        let ks: Vec<f64> = r.rows.iter().map(|row| row.ks.unwrap()).collect();
        let decreasing = ks.windows(2).all(|p| p[1] < p[0]);
        out.check(decreasing, format!("{functional}: KS {ks:.4?} strictly decreasing"));
        out.check(ks[2] <= 0.05, format!("{functional}: KS at n=1e4 = {:.4} (<= 0.05)", ks[2]));
    }
    out
}

fn poisson_agreement(w: usize) -> Outcome {
    let mut out = Outcome::new();
    let r = run_json(
        r#"{"experiment":"poisson_vs_uniform","body":"ball","dim":2,"n_grid":[1000,10000],
        "trials":5000,"master_seed":6}"#,
        w,
    );
    let Details::PoissonVsUniform(det) = &r.details else { panic!("wrong details") };
    let row = &det.per_n[1];
    for (label, v, ci) in [
        ("variance ratio", row.variance_ratio, row.variance_ratio_ci),
        ("missed-volume ratio", row.mean_ratio, row.mean_ratio_ci),
    ] {
        out.check(
            (0.9..=1.1).contains(&v) && ci.lo <= 1.0 && 1.0 <= ci.hi,
            format!("n=1e4 {label} {v:.4}, CI [{:.4}, {:.4}]", ci.lo, ci.hi),
        );
    }
    let (k3, k4) = (det.per_n[0].ks_two_sample, row.ks_two_sample);
    out.check(k4 < k3, format!("two-sample KS {k3:.4} at n=1e3, {k4:.4} at n=1e4"));
    out
}

const COUPLING: &str = r#"{"experiment":"coupling","body":"ball","dim":2,"n_grid":[1000,10000],
    "trials":2000,"master_seed":7}"#;

fn coupling_difference(w: usize) -> (Outcome, Report) {
    let mut out = Outcome::new();
    let r = run_json(COUPLING, w);
    let Details::Coupling(det) = &r.details else { panic!("wrong details") };
    for row in &det.per_n {
        let expected_m = (4.0 * (row.n as f64 * (row.n as f64).ln()).sqrt()).ceil() as usize;
        out.check(row.m == expected_m, format!("n={}: m = {} (expected {expected_m})", row.n, row.m));
        out.check(
            row.negative_volume_differences == 0 && row.volume_difference.min >= 0.0,
            format!(
                "n={}: {} negative volume differences, min {:.3e}",
                row.n, row.negative_volume_differences, row.volume_difference.min
            ),
        );
    }
    // Oracle for the normalization, recomputed from the reported means.
    let norm: Vec<f64> = det
        .per_n
        .iter()
        .map(|row| row.volume_difference.mean / (row.m as f64 * (row.n as f64).powf(-5.0 / 3.0)))
        .collect();
    let spread = norm.iter().cloned().fold(f64::MIN, f64::max) / norm.iter().cloned().fold(f64::MAX, f64::min);
    out.check(spread <= 4.0, format!("normalized mean difference {norm:.3?}, spread {spread:.3} (<= 4)"));
    (out, r)
}

fn tail_shape(w: usize) -> Outcome {
    let mut out = Outcome::new();
    let r = run_json(
        r#"{"experiment":"tail","body":"ball","dim":2,"n_grid":[1000],"trials":100000,"master_seed":8}"#,
        w,
    );
    let Details::Tail(det) = &r.details else { panic!("wrong details") };
    let row = &det.per_n[0];
    let (first, last) = (row.profile.first().unwrap(), row.profile.last().unwrap());
    out.check(
        first.lambda == 0.0 && last.lambda == 9.0,
        format!("lambda grid spans [{}, {}]", first.lambda, last.lambda),
    );
    let monotone = row.profile.windows(2).all(|p| p[1].exceedance <= p[0].exceedance)
        && last.exceedance < first.exceedance;
    out.check(monotone, "exceedance is non-increasing and decreases over the grid");
    let rate = row.rate.expect("tail rate fitted");
    out.check(rate.c > 0.2, format!("fitted rate c = {:.4} +- {:.4} (> 0.2)", rate.c, rate.c_stderr));
    let control = row.control_rate.expect("control rate fitted");
    out.check(
        (control.c - 0.5).abs() <= 0.05,
        format!("normal control rate {:.4} (0.5 +- 0.05)", control.c),
    );
    out
}

const FLOATING: &str = r#"{"experiment":"floating_and_wide","body":"ball","dim":2,"n_grid":[10000],
    "trials":200,"master_seed":9,"constants":{"nu":5,"probes":1000,"wide_samples":100000}}"#;

fn floating_and_wide(w: usize) -> (Outcome, Report) {
    let mut out = Outcome::new();
    let r = run_json(FLOATING, w);
    let Details::FloatingAndWide(det) = &r.details else { panic!("wrong details") };
    let row = &det.per_n[0];
    out.check(
        row.not_contained_freq <= 0.01,
        format!(
            "floating body escapes the hull in {}/{} trials ({} probes)",
            row.not_contained, row.trials, row.probes
        ),
    );
    let bound = 10.0 * (row.n as f64).ln();
    out.check(
        row.trials_over_threshold == 0 && (row.max_wideness as f64) <= bound,
        format!("max wideness {} over all trials (<= {bound:.2})", row.max_wideness),
    );
    let vols: Vec<f64> = row.wide_volumes.iter().map(|e| e.mean).collect();
    out.check(
        vols.windows(2).all(|p| p[1] <= p[0]),
        format!("Vol(U_k) non-increasing in k: {:.3?}", &vols[..vols.len().min(6)]),
    );
    (out, r)
}

/// Exact `P(Bin(m, a/20) >= k)` as a ratio of integers.
fn exact_binomial_tail(m: u32, a: u32, k: u32) -> f64 {
    let mut num = BigUint::zero();
    let mut binom = BigUint::one();
    for j in 0..=m {
        if j > 0 {
            binom = binom * BigUint::from(m - j + 1) / BigUint::from(j);
        }
        if j >= k {
            num += &binom * BigUint::from(a).pow(j) * BigUint::from(20 - a).pow(m - j);
        }
    }
    let den = BigUint::from(20u32).pow(m);
    num.to_f64().unwrap() / den.to_f64().unwrap()
}

fn functional_oracles() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);

    let disk = Body::ball(2).unwrap();
    let r = 1.0 / std::f64::consts::PI.sqrt();
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        // Uniform point in the disk by polar coordinates.
        let rho = r * rng.random::<f64>().sqrt();
        let phi = std::f64::consts::TAU * rng.random::<f64>();
        let x = Point::new(&[rho * phi.cos(), rho * phi.sin()]).unwrap();
        let segment = r * r * (rho / r).acos() - rho * (r * r - rho * rho).sqrt();
        let got = minimal_cap_volume(&disk, &x).unwrap().volume;
        worst = worst.max((got - segment).abs());
    }
    out.check(worst <= 1e-6, format!("minimal cap vs segment formula, max error {worst:.3e} (<= 1e-6)"));

    let mut worst = 0.0f64;
    for d in [2, 3] {
        for kind in 0..4 {
            let body = body_for(kind, d);
            for _ in 0..100 {
                let u = random_direction(d, &mut rng);
                for eps in [1e-4, 1e-3, 1e-2, 0.1, 0.25, 0.5] {
                    let cap = cap_for_volume(&body, &u, eps).unwrap();
                    worst = worst.max((cap_volume(&body, &u, cap.offset).unwrap() - eps).abs());
                }
            }
        }
    }
    out.check(worst <= 2e-9, format!("cap_for_volume round trip, max error {worst:.3e} (<= 2e-9)"));

    let (mut cases, mut violations) = (0, 0);
    for m in 1..=25u32 {
        for a in 1..20u32 {
            let mean = m as f64 * a as f64 / 20.0;
            for k in 0..=m {
                let t = k as f64 - mean;
                if t < 0.0 {
                    continue;
                }
                cases += 1;
                if exact_binomial_tail(m, a, k) > chernoff_bound(mean, t).unwrap() * (1.0 + 1e-12) {
                    violations += 1;
                }
            }
        }
    }
    out.check(violations == 0, format!("chernoff bound violated in {violations}/{cases} binomial tails"));
    out
}

fn determinism(coupling: &Report, floating: &Report, w: usize) -> Outcome {
    let mut out = Outcome::new();
    let other = if w == 1 { 3 } else { 1 };
    for (label, json, first) in [("coupling", COUPLING, coupling), ("floating_and_wide", FLOATING, floating)] {
        let again = run_json(json, other);
        let same = again.to_json().unwrap() == first.to_json().unwrap();
        out.check(same, format!("{label}: report.json identical with {w} and {other} workers"));
    }
    out
}

fn main() {
    let w = workers();
    let mut all_pass = true;
    let mut report = |id: usize, name: &str, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = run();
        all_pass &= o.pass;
        println!(
            "{} {id:>2} {name} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        for line in &o.lines {
            println!("       {line}");
        }
    };
    report(1, "hull matches the brute-force oracle", &mut hull_oracle);
    report(2, "variance exponents", &mut || variance_exponents(w));
    report(3, "expectation exponents and Efron identity", &mut || expectation_exponents(w));
    report(4, "normal approximation trend", &mut || clt_trend(w));
    report(5, "Poisson and uniform models agree", &mut || poisson_agreement(w));
    let mut coupling = None;
    report(6, "coupling difference", &mut || {
        let (o, r) = coupling_difference(w);
        coupling = Some(r);
        o
    });
    report(7, "tail shape", &mut || tail_shape(w));
    let mut floating = None;
    report(8, "floating body and wideness", &mut || {
        let (o, r) = floating_and_wide(w);
        floating = Some(r);
        o
    });
    report(9, "functional oracles", &mut functional_oracles);
    let (c, f) = (coupling.unwrap(), floating.unwrap());
    report(10, "determinism across worker counts", &mut || determinism(&c, &f, w));
    if !all_pass {
        std::process::exit(1);
    }
}
