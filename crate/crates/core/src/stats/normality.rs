use crate::{Error, Result};

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// One-sample Kolmogorov-Smirnov statistic of `values` against `cdf`.
pub fn ks_statistic(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, x) in sorted.iter().enumerate() {
        let f = cdf(*x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    d
}

/// KS distance between the self-standardized sample and the standard
/// normal: values are centered by their mean and scaled by their
/// population standard deviation first.
pub fn ks_distance_to_normal(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::data("KS distance needs at least two values"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::data("non-finite value in sample"));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    if !(var > 0.0) {
        return Err(Error::data("sample has zero variance"));
    }
    let sd = var.sqrt();
    let z: Vec<f64> = values.iter().map(|x| (x - mean) / sd).collect();
    Ok(ks_statistic(&z, normal_cdf))
}

/// Two-sample KS statistic `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::data("two-sample KS needs non-empty samples"));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Asymptotic two-sample KS critical value at level `alpha`:
/// `sqrt(-ln(alpha/2)/2) * sqrt((n+m)/(n m))`.
pub fn ks_critical_value(n: usize, m: usize, alpha: f64) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Exp1, StandardNormal};

    use super::*;

    #[test]
    fn cdf_values() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((normal_cdf(1.96) - 0.975_002_104_851_780).abs() < 1e-14);
        assert!((normal_cdf(-3.0) - 0.001_349_898_031_630_094_6).abs() < 1e-16);
    }

    #[test]
    fn single_value_against_phi() {
        assert_eq!(ks_statistic(&[0.0], normal_cdf), 0.5);
    }

    #[test]
    fn guards() {
        assert!(matches!(ks_distance_to_normal(&[1.0]), Err(Error::Data(_))));
        assert!(matches!(ks_distance_to_normal(&[2.0, 2.0, 2.0]), Err(Error::Data(_))));
    }

    #[test]
    fn normal_and_exponential_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let normal: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let d = ks_distance_to_normal(&normal).unwrap();
        assert!(d < 1.63 / (n as f64).sqrt(), "{d}");
        let exp: Vec<f64> = (0..n).map(|_| Exp1.sample(&mut rng)).collect();
        assert!(ks_distance_to_normal(&exp).unwrap() > 0.05);
    }

    #[test]
    fn affine_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..5000).map(|_| Exp1.sample(&mut rng)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 7.0).collect();
        let (a, b) = (ks_distance_to_normal(&xs).unwrap(), ks_distance_to_normal(&ys).unwrap());
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn two_sample() {
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), 1.0);
        assert!((ks_two_sample(&[1.0, 2.0, 3.0, 4.0], &[2.5]).unwrap() - 0.5).abs() < 1e-15);
        assert!((ks_critical_value(100, 100, 0.01) - 1.6276 * 0.02f64.sqrt()).abs() < 1e-4);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a: Vec<f64> = (0..4000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let b: Vec<f64> = (0..3000).map(|_| StandardNormal.sample(&mut rng)).collect();
        assert!(ks_two_sample(&a, &b).unwrap() < ks_critical_value(4000, 3000, 0.01));
    }
}
