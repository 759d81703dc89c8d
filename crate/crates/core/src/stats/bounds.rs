use crate::{Error, Result};

/// `exp(-t^2 / (2 (mean + t/3)))`, a bound on `P(X >= mean + t)` for a sum of
/// independent indicators with expectation `mean`.
pub fn chernoff_bound(mean: f64, t: f64) -> Result<f64> {
    if !(mean >= 0.0) || !(t >= 0.0) {
        return Err(Error::invalid(format!(
            "chernoff bound needs mean >= 0 and t >= 0, got mean={mean}, t={t}"
        )));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    Ok((-t * t / (2.0 * (mean + t / 3.0))).exp())
}

/// Exact `P(Bin(m, p) >= k)`.
pub fn binomial_upper_tail(m: u32, p: f64, k: u32) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut total = 0.0;
    let mut coef = 1.0f64;
    for j in 0..=m {
        if j > 0 {
            coef = coef * (m - j + 1) as f64 / j as f64;
        }
        if j >= k {
            total += coef * p.powi(j as i32) * (1.0 - p).powi((m - j) as i32);
        }
    }
    total.min(1.0)
}
