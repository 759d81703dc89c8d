//! Experiment-specific report sections.

use serde::{Deserialize, Serialize};

use super::report::NRow;
use crate::functionals::{CoverAudit, Estimate, GEstimate};
use crate::stats::{Interval, TailPoint, TailRate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Details {
    Clt(CltDetails),
    VarianceScaling(VarianceDetails),
    Expectation(ExpectationDetails),
    Coupling(CouplingDetails),
    PoissonVsUniform(PoissonDetails),
    Tail(TailDetails),
    FloatingAndWide(FloatingDetails),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CltDetails {
    pub ks_strictly_decreasing: bool,
    /// One-sample KS critical values at level 0.05, `1.358 / sqrt(trials)`,
    /// for reference only: the standardization uses the sample moments.
    pub ks_reference_critical: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceDetails {
    pub expected_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfronRow {
    pub n: usize,
    pub trials: usize,
    /// `E f_0(K_n)`.
    pub f0: Estimate,
    /// `n E(1 - Vol(K_{n-1}))`, from the first `n - 1` points of each trial.
    pub efron: Estimate,
    /// Paired per-trial difference of the two.
    pub difference: Estimate,
    /// `difference / its standard error`.
    pub z: f64,
    pub within_three_stderr: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationDetails {
    /// `missed_volume` (`1 - Vol`) or `f<i>`.
    pub quantity: String,
    pub expected_slope: f64,
    /// Empty for the Poisson model.
    pub efron: Vec<EfronRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistBin {
    pub value: usize,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffStats {
    pub mean: f64,
    pub stderr: f64,
    pub min: f64,
    pub max: f64,
    pub positive: usize,
    pub negative: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Typicality {
    pub c: f64,
    pub eps_star: f64,
    pub rho_eps_star: Estimate,
    pub g_eps_star: GEstimate,
    /// `C sqrt(n^{-(d+3)/(d+1)} ln n)`.
    pub deviation_threshold: f64,
    /// `C g(eps*) (m rho(eps*) + ln n)`.
    pub difference_threshold: f64,
    /// Frequencies of `|Y(P') - mu'|`, `|Y(P) - mu|` and `Y(P') - Y(P)`
    /// within their thresholds, and of all three at once.
    pub freq_deviation_prime: f64,
    pub freq_deviation: f64,
    pub freq_difference: f64,
    pub freq_all: f64,
}

/// `ln S_i / ln S_0` for destroyed `i`-faces `S_i` and visible vertices
/// `S_0`, against the exponent `alpha_i = min(i, d - i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceRatio {
    pub i: usize,
    pub alpha: usize,
    pub pairs: usize,
    pub mean_ratio: f64,
    pub max_ratio: f64,
    pub loglog_slope: Option<f64>,
    pub loglog_slope_stderr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InsertionStats {
    /// Points of `Q` offered, and those that fell outside the hull.
    pub offered: u64,
    pub outside: u64,
    pub visible_vertices: Vec<HistBin>,
    /// Entry `i` is the histogram of destroyed `i`-faces.
    pub destroyed_faces: Vec<Vec<HistBin>>,
    pub ratios: Vec<FaceRatio>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingRow {
    pub n: usize,
    pub n_prime: usize,
    pub m: usize,
    pub trials: usize,
    /// `Y(P') - Y(P)` for the volume.
    pub volume_difference: DiffStats,
    pub negative_volume_differences: usize,
    /// Entry `i` is `Z_i(P') - Z_i(P)`.
    pub face_differences: Vec<DiffStats>,
    pub var: f64,
    pub var_prime: f64,
    /// Mean of `(Y(P') - mu')^2 - (Y(P) - mu)^2`, an estimate of `s' - s`.
    pub variance_shift: Estimate,
    /// Mean volume difference over `m n^{-1-2/(d+1)}`.
    pub normalized_difference: Option<f64>,
    pub typicality: Option<Typicality>,
    pub insertions: InsertionStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingDetails {
    pub per_n: Vec<CouplingRow>,
    /// Largest over smallest normalized difference across the grid.
    pub normalized_spread: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonRow {
    pub n: usize,
    pub trials: usize,
    pub uniform: NRow,
    pub poisson: NRow,
    /// Ratio of expectations of the missed volume (volume) or of the face
    /// count, Poisson over uniform.
    pub mean_ratio: f64,
    pub mean_ratio_ci: Interval,
    pub variance_ratio: f64,
    pub variance_ratio_ci: Interval,
    pub ks_two_sample: f64,
    pub ks_critical_05: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonDetails {
    pub confidence: f64,
    pub per_n: Vec<PoissonRow>,
    pub ks_strictly_decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub n: usize,
    pub profile: Vec<TailPoint>,
    pub rate: Option<TailRate>,
    pub control_profile: Vec<TailPoint>,
    pub control_rate: Option<TailRate>,
    /// Whether `exceedance <= 2 exp(-c lambda)` holds on the grid for the
    /// fitted `c`.
    pub bound_holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailDetails {
    pub min_lambda: f64,
    pub per_n: Vec<TailRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverResult {
    pub caps: usize,
    pub c1: f64,
    pub c2: f64,
    pub audit: Option<CoverAudit>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatingRow {
    pub n: usize,
    pub trials: usize,
    pub eps_star: f64,
    pub probes: usize,
    /// Trials in which some probe of the floating body boundary lies outside
    /// the hull.
    pub not_contained: usize,
    pub not_contained_freq: f64,
    /// Mean over trials of `Vol(U_{k,P})`, entry `k - 1`.
    pub wide_volumes: Vec<Estimate>,
    pub wide_non_increasing: bool,
    pub wideness_threshold: f64,
    pub max_wideness: usize,
    pub mean_max_wideness: f64,
    pub trials_over_threshold: usize,
    pub rho_one_over_n: Estimate,
    pub freq_wide_bounded: f64,
    pub freq_no_wide_points: f64,
    pub freq_missed_bounded: f64,
    pub freq_perfect: f64,
    pub cover: Option<CoverResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatingDetails {
    pub per_n: Vec<FloatingRow>,
}
