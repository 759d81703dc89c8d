use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn covers(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Percentile bootstrap interval. `stat` receives resampled indices into
/// `0..n`; paired data are resampled jointly by indexing both samples with
/// the same indices.
pub fn bootstrap_ci<R: Rng + ?Sized>(
    n: usize,
    resamples: usize,
    level: f64,
    rng: &mut R,
    mut stat: impl FnMut(&[usize]) -> f64,
) -> Result<Interval> {
    if n == 0 || resamples < 10 || !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid("bootstrap needs data, 10+ resamples and a level in (0, 1)"));
    }
    let mut idx = vec![0usize; n];
    let mut stats: Vec<f64> = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        for i in idx.iter_mut() {
            *i = rng.random_range(0..n);
        }
        let s = stat(&idx);
        if s.is_finite() {
            stats.push(s);
        }
    }
    if stats.len() < resamples / 2 {
        return Err(Error::data("bootstrap statistic mostly non-finite"));
    }
    stats.sort_by(f64::total_cmp);
    let alpha = (1.0 - level) / 2.0;
    let pick = |q: f64| {
        let pos = q * (stats.len() - 1) as f64;
        let (i, f) = (pos.floor() as usize, pos.fract());
        let j = (i + 1).min(stats.len() - 1);
        stats[i] * (1.0 - f) + stats[j] * f
    };
    Ok(Interval {
        lo: pick(alpha),
        hi: pick(1.0 - alpha),
    })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    use super::*;

    #[test]
    fn mean_interval_has_normal_width() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let xs: Vec<f64> = (0..2000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mean = |idx: &[usize]| idx.iter().map(|&i| xs[i]).sum::<f64>() / idx.len() as f64;
        let ci = bootstrap_ci(xs.len(), 2000, 0.99, &mut rng, mean).unwrap();
        let full = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!(ci.covers(full));
        let width = ci.hi - ci.lo;
        let expected = 2.0 * 2.5758 / (2000f64).sqrt();
        assert!((width / expected - 1.0).abs() < 0.15, "{width} vs {expected}");
        assert!(bootstrap_ci(0, 100, 0.99, &mut rng, |_| 0.0).is_err());
    }
}
