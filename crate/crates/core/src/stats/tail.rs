use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Empirical exceedance `P(|X - mean| >= sqrt(lambda * scale))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailPoint {
    pub lambda: f64,
    pub exceedance: f64,
    pub count: usize,
}

/// `lambda = 0, 0.25, ..., 9`.
pub fn default_lambda_grid() -> Vec<f64> {
    (0..=36).map(|k| k as f64 * 0.25).collect()
}

pub fn tail_profile(values: &[f64], var_scale: f64, lambdas: &[f64]) -> Result<Vec<TailPoint>> {
    if values.is_empty() {
        return Err(Error::data("tail profile of an empty sample"));
    }
    if !(var_scale > 0.0) || !var_scale.is_finite() {
        return Err(Error::invalid(format!("variance scale must be positive, got {var_scale}")));
    }
    if lambdas.iter().any(|l| !(*l >= 0.0)) {
        return Err(Error::invalid("lambda grid must be non-negative"));
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let mut dev: Vec<f64> = values.iter().map(|v| (v - mean).abs()).collect();
    dev.sort_by(f64::total_cmp);
    Ok(lambdas
        .iter()
        .map(|&lambda| {
            let thr = (lambda * var_scale).sqrt();
            let below = dev.partition_point(|x| *x < thr);
            let count = n - below;
            TailPoint {
                lambda,
                exceedance: count as f64 / n as f64,
                count,
            }
        })
        .collect())
}

/// Fit of `ln P(lambda) = a - c lambda - b ln lambda` over the upper part of a
/// tail profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailRate {
    /// Exponential decay rate.
    pub c: f64,
    pub c_stderr: f64,
    /// Exponent of the polynomial prefactor.
    pub b: f64,
    pub intercept: f64,
    pub points_used: usize,
    /// Exceedance is non-increasing and actually decreases over the grid.
    pub monotone: bool,
    /// Secant decay rate over the upper half of the fitted range is below
    /// `SLOW_DECAY_RATIO` times the rate over the lower half, or the fitted
    /// rate is not positive. A normal tail gives a ratio near 0.9, a
    /// Laplace tail (exponential in `sqrt(lambda)`) about 0.7.
    pub slower_than_exponential: bool,
}

pub const SLOW_DECAY_RATIO: f64 = 0.75;

/// Minimum exceedance count for a grid point to enter the fit.
const MIN_COUNT: usize = 5;

pub fn fit_tail_rate(profile: &[TailPoint], min_lambda: f64) -> Result<TailRate> {
    let used: Vec<&TailPoint> = profile
        .iter()
        .filter(|p| p.lambda >= min_lambda && p.lambda > 0.0 && p.count >= MIN_COUNT && p.exceedance < 1.0)
        .collect();
    if used.len() < 4 {
        return Err(Error::data(format!(
            "tail fit needs at least four grid points with {MIN_COUNT}+ exceedances, got {}",
            used.len()
        )));
    }
    // Weighted least squares with weights ~ 1 / Var(ln p_hat).
    let mut xtx = [[0.0f64; 3]; 3];
    let mut xty = [0.0f64; 3];
    let rows: Vec<([f64; 3], f64, f64)> = used
        .iter()
        .map(|p| {
            let w = p.count as f64 / (1.0 - p.exceedance);
            ([1.0, -p.lambda, -p.lambda.ln()], p.exceedance.ln(), w)
        })
        .collect();
    for (x, y, w) in &rows {
        for i in 0..3 {
            xty[i] += w * x[i] * y;
            for j in 0..3 {
                xtx[i][j] += w * x[i] * x[j];
            }
        }
    }
    let inv = invert3(&xtx).ok_or_else(|| Error::data("tail fit is singular"))?;
    let beta: Vec<f64> = (0..3).map(|i| (0..3).map(|j| inv[i][j] * xty[j]).sum()).collect();
    let rss: f64 = rows
        .iter()
        .map(|(x, y, w)| {
            let fit: f64 = (0..3).map(|i| beta[i] * x[i]).sum();
            w * (y - fit).powi(2)
        })
        .sum();
    let dof = (rows.len() as f64 - 3.0).max(1.0);
    let c_stderr = (rss / dof * inv[1][1]).max(0.0).sqrt();

    let monotone = profile.windows(2).all(|w| w[1].exceedance <= w[0].exceedance)
        && profile.last().map(|p| p.exceedance) < profile.first().map(|p| p.exceedance);
    let k = used.len();
    let secant = |a: &TailPoint, b: &TailPoint| -(b.exceedance.ln() - a.exceedance.ln()) / (b.lambda - a.lambda);
    let lower = secant(used[0], used[k / 2]);
    let upper = secant(used[k / 2], used[k - 1]);
    Ok(TailRate {
        c: beta[1],
        c_stderr,
        b: beta[2],
        intercept: beta[0],
        points_used: k,
        monotone,
        slower_than_exponential: beta[1] <= 0.0 || upper < SLOW_DECAY_RATIO * lower,
    })
}

fn invert3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / det;
        }
    }
    Some(inv)
}
