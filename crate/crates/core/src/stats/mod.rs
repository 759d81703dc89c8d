//! Measurement instruments: streaming moments, normality distances, tail
//! profiles, power-law fits and bootstrap intervals.

mod bootstrap;
mod bounds;
mod moments;
mod normality;
mod regression;
mod tail;

pub use bootstrap::{bootstrap_ci, Interval};
pub use bounds::{binomial_upper_tail, chernoff_bound};
pub use moments::{absolute_central_moments, jackknife_variance_stderr, MomentAccumulator, Summary};
pub use normality::{
    ks_critical_value, ks_distance_to_normal, ks_statistic, ks_two_sample, normal_cdf,
};
pub use regression::{fit_line, fit_power_law, LineFit, PowerLawFit};
pub use tail::{default_lambda_grid, fit_tail_rate, tail_profile, TailPoint, TailRate};
