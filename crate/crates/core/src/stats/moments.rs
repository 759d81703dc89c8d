use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const MAX_ORDER: usize = 8;

/// One-pass central moment sums up to a fixed order, mergeable across
/// workers (pairwise update formulas of arbitrary order).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentAccumulator {
    count: u64,
    mean: f64,
    /// `sums[p] = sum (x - mean)^p` for `p = 2..=kmax`; slots 0 and 1 unused.
    sums: [f64; MAX_ORDER + 1],
    kmax: usize,
}

impl Default for MomentAccumulator {
    fn default() -> Self {
        MomentAccumulator::new(6)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl MomentAccumulator {
    /// Accumulator for central moments up to order `kmax` (clamped to 2..=8).
    pub fn new(kmax: usize) -> Self {
        MomentAccumulator {
            count: 0,
            mean: 0.0,
            sums: [0.0; MAX_ORDER + 1],
            kmax: kmax.clamp(2, MAX_ORDER),
        }
    }

    pub fn push(&mut self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::data(format!("non-finite value {x}")));
        }
        let mut one = MomentAccumulator::new(self.kmax);
        one.count = 1;
        one.mean = x;
        self.merge(&one);
        Ok(())
    }

    pub fn extend(&mut self, values: &[f64]) -> Result<()> {
        values.iter().try_for_each(|v| self.push(*v))
    }

    pub fn from_values(values: &[f64]) -> Result<Self> {
        let mut acc = MomentAccumulator::default();
        acc.extend(values)?;
        Ok(acc)
    }

    pub fn merge(&mut self, other: &MomentAccumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            let kmax = self.kmax;
            *self = other.clone();
            self.kmax = kmax.min(other.kmax);
            return;
        }
        let kmax = self.kmax.min(other.kmax);
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        let delta = other.mean - self.mean;
        let mut sums = [0.0; MAX_ORDER + 1];
        for p in 2..=kmax {
            let mut s = self.sums[p] + other.sums[p];
            for k in 1..=p - 2 {
                let c = binomial(p, k) * delta.powi(k as i32);
                s += c
                    * ((-nb / n).powi(k as i32) * self.sums[p - k]
                        + (na / n).powi(k as i32) * other.sums[p - k]);
            }
            let pi = p as i32;
            s += (na * nb * delta / n).powi(pi)
                * (1.0 / nb.powi(pi - 1) - (-1.0 / na).powi(pi - 1));
            sums[p] = s;
        }
        self.mean += delta * nb / n;
        self.count += other.count;
        self.sums = sums;
        self.kmax = kmax;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Population variance.
    pub fn variance(&self) -> f64 {
        self.central_moment(2)
    }

    /// Signed central moment `E (X - mean)^p` (population normalization).
    pub fn central_moment(&self, p: usize) -> f64 {
        if self.count == 0 || p > self.kmax {
            return f64::NAN;
        }
        if p == 0 {
            return 1.0;
        }
        if p == 1 {
            return 0.0;
        }
        self.sums[p] / self.count as f64
    }

    pub fn kurtosis(&self) -> f64 {
        let v = self.variance();
        self.central_moment(4) / (v * v)
    }
}

/// `M_k = mean |x - mean|^k` for `k = 1..=kmax`; index 0 holds `M_1`.
pub fn absolute_central_moments(values: &[f64], kmax: usize) -> Vec<f64> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (1..=kmax)
        .map(|k| values.iter().map(|x| (x - mean).abs().powi(k as i32)).sum::<f64>() / n)
        .collect()
}

/// Jackknife standard error of the population variance.
pub fn jackknife_variance_stderr(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 3 {
        return f64::NAN;
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let ss: f64 = values.iter().map(|x| (x - mean).powi(2)).sum();
    let loo: Vec<f64> = values
        .iter()
        .map(|x| (ss - (x - mean).powi(2) * nf / (nf - 1.0)) / (nf - 1.0))
        .collect();
    let avg = loo.iter().sum::<f64>() / nf;
    ((nf - 1.0) / nf * loo.iter().map(|v| (v - avg).powi(2)).sum::<f64>()).sqrt()
}

/// Per-sample summary written to reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub mean_stderr: f64,
    pub variance: f64,
    pub variance_stderr: f64,
    /// Absolute central moments `M_3..M_6`.
    pub abs_moments: [f64; 4],
    /// Standardized signed third and fourth central moments.
    pub skewness: f64,
    pub kurtosis: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Result<Summary> {
        if values.is_empty() {
            return Err(Error::data("empty sample"));
        }
        let acc = MomentAccumulator::from_values(values)?;
        let abs = absolute_central_moments(values, 6);
        let var = acc.variance();
        let n = values.len() as f64;
        Ok(Summary {
            count: values.len(),
            mean: acc.mean(),
            mean_stderr: (var / n).sqrt(),
            variance: var,
            variance_stderr: jackknife_variance_stderr(values),
            abs_moments: [abs[2], abs[3], abs[4], abs[5]],
            skewness: acc.central_moment(3) / var.powf(1.5),
            kurtosis: acc.kurtosis(),
        })
    }
}
