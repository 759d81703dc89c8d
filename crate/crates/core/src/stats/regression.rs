use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Ordinary least-squares line `y = intercept + slope x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
}

/// Log-log fit `ln v = intercept + slope ln n`.
pub type PowerLawFit = LineFit;

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::data("line fit needs at least two paired values"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::data("line fit needs distinct abscissae"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let slope_stderr = if xs.len() > 2 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    let r_squared = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    Ok(LineFit {
        slope,
        intercept,
        slope_stderr,
        r_squared,
    })
}

/// Least squares on `(ln n, ln v)`.
pub fn fit_power_law(pairs: &[(f64, f64)]) -> Result<PowerLawFit> {
    if pairs.len() < 3 {
        return Err(Error::data("power-law fit needs at least three points"));
    }
    if pairs.iter().any(|(n, v)| !(*n > 0.0 && *v > 0.0) || !n.is_finite() || !v.is_finite()) {
        return Err(Error::data("power-law fit needs positive finite data"));
    }
    let xs: Vec<f64> = pairs.iter().map(|(n, _)| n.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|(_, v)| v.ln()).collect();
    fit_line(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn exact_power_law() {
        let fit = fit_power_law(&[(10.0, 3e-2), (100.0, 3e-4), (1000.0, 3e-6)]).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        let flat = fit_power_law(&[(10.0, 2.0), (20.0, 2.0), (40.0, 2.0)]).unwrap();
        assert!(flat.slope.abs() < 1e-15);
        assert!(fit_power_law(&[(10.0, 1.0), (20.0, 0.0), (40.0, 2.0)]).is_err());
        assert!(fit_power_law(&[(10.0, 1.0), (20.0, 1.0)]).is_err());
    }

    #[test]
    fn planted_exponents_are_exact() {
        for b in [-5.0 / 3.0, -1.5, 1.0 / 3.0, 2.0] {
            let pairs: Vec<(f64, f64)> = (0..7).map(|k| {
                let n = 200.0 * 2f64.powi(k);
                (n, 0.7 * n.powf(b))
            }).collect();
            assert!((fit_power_law(&pairs).unwrap().slope - b).abs() < 1e-12);
        }
    }

    #[test]
    fn noisy_power_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pairs: Vec<(f64, f64)> = (0..20)
            .map(|k| {
                let n = 100.0 * 10f64.powf(k as f64 / 19.0);
                (n, n.powf(-5.0 / 3.0) * (1.0 + 0.01 * rng.random_range(-1.0..1.0)))
            })
            .collect();
        let fit = fit_power_law(&pairs).unwrap();
        assert!((fit.slope + 5.0 / 3.0).abs() < 0.02);
        assert!(fit.slope_stderr < 0.02);
    }
}
