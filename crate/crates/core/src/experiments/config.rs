use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::geometry::{Body, BodyKind, MAX_DIM};
use crate::{Error, Result};

/// The seven experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Clt,
    VarianceScaling,
    Expectation,
    Coupling,
    PoissonVsUniform,
    Tail,
    FloatingAndWide,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::Clt,
        ExperimentKind::VarianceScaling,
        ExperimentKind::Expectation,
        ExperimentKind::Coupling,
        ExperimentKind::PoissonVsUniform,
        ExperimentKind::Tail,
        ExperimentKind::FloatingAndWide,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Clt => "clt",
            ExperimentKind::VarianceScaling => "variance_scaling",
            ExperimentKind::Expectation => "expectation",
            ExperimentKind::Coupling => "coupling",
            ExperimentKind::PoissonVsUniform => "poisson_vs_uniform",
            ExperimentKind::Tail => "tail",
            ExperimentKind::FloatingAndWide => "floating_and_wide",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentKind::Clt => {
                "KS distance of the standardized functional to the normal law, per n, and its log-log slope"
            }
            ExperimentKind::VarianceScaling => {
                "variance of the functional per n with jackknife errors and the fitted power of n"
            }
            ExperimentKind::Expectation => {
                "mean missed volume or face count per n, fitted power of n, and the Efron identity check"
            }
            ExperimentKind::Coupling => {
                "coupled samples P and P' = P + Q: differences, variance shift, typicality frequencies, insertion statistics"
            }
            ExperimentKind::PoissonVsUniform => {
                "paired Poisson and uniform models: missed-volume and variance ratios with bootstrap intervals, two-sample KS"
            }
            ExperimentKind::Tail => {
                "tail profile of the functional at fixed n, fitted exponential rate, and a normal control"
            }
            ExperimentKind::FloatingAndWide => {
                "containment of the floating body in the hull, k-wide volumes, maximal wideness, perfect-set frequency"
            }
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The hull functional recorded per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Functional {
    #[default]
    Volume,
    /// Number of `i`-dimensional faces.
    Faces(usize),
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functional::Volume => f.write_str("volume"),
            Functional::Faces(i) => write!(f, "f{i}"),
        }
    }
}

impl std::str::FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "volume" {
            return Ok(Functional::Volume);
        }
        let digits = s
            .strip_prefix("f_")
            .or_else(|| s.strip_prefix('f'))
            .ok_or_else(|| Error::Config(format!("unknown functional {s:?}; use \"volume\" or \"f<i>\"")))?;
        digits
            .parse()
            .map(Functional::Faces)
            .map_err(|_| Error::Config(format!("unknown functional {s:?}; use \"volume\" or \"f<i>\"")))
    }
}

impl Serialize for Functional {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Functional {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Exactly `n` uniform points.
    Uniform,
    /// A Poisson(`n`) number of uniform points.
    Poisson,
    /// `P` of size `n` and `P' = P + Q` of size `n' = n + ceil(A sqrt(n ln n))`.
    Coupled,
}

/// Tunable constants. The defaults are working values, not the unspecified
/// constants of the asymptotic statements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Constants {
    /// `eps* = nu ln n / n`.
    pub nu: f64,
    /// Coupled size `n' = n + ceil(A sqrt(n ln n))`.
    pub a: f64,
    /// Seen-region volume `c0 ln n / n` of the cap cover.
    pub c0: f64,
    /// Cover cap volume `c2 ln n / n`; derived from `c0` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    /// Lambda grid of the tail profile; `0, 0.25, ..., 9` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_grid: Option<Vec<f64>>,
    /// Smallest lambda entering the tail-rate fit.
    pub tail_min_lambda: f64,
    /// The constant `C` of the typicality conditions.
    pub typical_c: f64,
    /// Boundary probes and samples per probe for `g(eps*)`.
    pub g_probes: usize,
    pub g_samples: usize,
    /// Monte Carlo samples for wet-part volumes of non-smooth bodies.
    pub wet_samples: usize,
    /// Perfect-set constants: `T_k = max(c3 max(k/(c4 n), rho_{k/(c4 n)}
    /// exp(-wide_decay k)), c6 ln n / n)` for `c3 <= k <= c5 ln n`, and the
    /// missed volume at most `c7 rho_{1/n}`.
    pub c3: f64,
    pub c4: f64,
    pub wide_decay: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    /// Boundary probes of `F_{eps*}` tested for containment in the hull.
    pub probes: usize,
    /// Uniform probes per trial for the k-wide volumes.
    pub wide_samples: usize,
    /// Run the cap-cover containment audit.
    pub cover_audit: bool,
    pub audit_points: usize,
    pub audit_proposals: usize,
    pub bootstrap_resamples: usize,
    /// Level of the bootstrap intervals.
    pub confidence: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            nu: 5.0,
            a: 4.0,
            c0: 5.0,
            c2: None,
            lambda_grid: None,
            tail_min_lambda: 2.0,
            typical_c: 2.0,
            g_probes: 8,
            g_samples: 20_000,
            wet_samples: 20_000,
            c3: 4.0,
            c4: 1.0,
            wide_decay: 0.5,
            c5: 10.0,
            c6: 10.0,
            c7: 10.0,
            probes: 1000,
            wide_samples: 100_000,
            cover_audit: false,
            audit_points: 1000,
            audit_proposals: 2000,
            bootstrap_resamples: 1000,
            confidence: 0.99,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub body: BodyKind,
    /// Semi-axis proportions of an ellipsoid; empty for the other bodies.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub body_params: Vec<f64>,
    pub dim: usize,
    pub n_grid: Vec<usize>,
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub functional: Functional,
    /// Sampling model; each experiment has its own default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
    #[serde(default)]
    pub constants: Constants,
    /// Worker threads; does not affect results.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Output directory; the command line `--out` takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Also write per-trial values.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub raw: bool,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ExperimentConfig {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| config_err(format!("malformed config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn body(&self) -> Result<Body> {
        Body::new(self.body, self.dim, &self.body_params).map_err(|e| config_err(e.to_string()))
    }

    /// The model in effect, after applying the experiment's default.
    pub fn effective_model(&self) -> Model {
        self.model.unwrap_or(match self.experiment {
            ExperimentKind::Coupling => Model::Coupled,
            _ => Model::Uniform,
        })
    }

    /// The configuration as echoed in reports: everything that determines
    /// the results, nothing that does not (workers, output location, raw
    /// flag).
    pub fn echo(&self) -> ExperimentConfig {
        ExperimentConfig {
            workers: None,
            output: None,
            raw: false,
            model: Some(self.effective_model()),
            ..self.clone()
        }
    }

    pub fn lambda_grid(&self) -> Vec<f64> {
        self.constants
            .lambda_grid
            .clone()
            .unwrap_or_else(crate::stats::default_lambda_grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_DIM).contains(&self.dim) {
            return Err(config_err(format!("dim must be in 2..={MAX_DIM}, got {}", self.dim)));
        }
        self.body()?;
        if self.n_grid.is_empty() {
            return Err(config_err("n_grid must not be empty"));
        }
        if self.n_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(config_err("n_grid must be strictly increasing"));
        }
        if self.n_grid[0] < self.dim + 1 {
            return Err(config_err(format!(
                "every n must be at least dim + 1 = {}",
                self.dim + 1
            )));
        }
        if self.trials == 0 {
            return Err(config_err("trials must be at least 1"));
        }
        let needs_two = matches!(
            self.experiment,
            ExperimentKind::Clt
                | ExperimentKind::VarianceScaling
                | ExperimentKind::Tail
                | ExperimentKind::PoissonVsUniform
        );
        if needs_two && self.trials < 2 {
            return Err(config_err(format!(
                "{} needs at least 2 trials per n",
                self.experiment
            )));
        }
        if let Functional::Faces(i) = self.functional {
            if i >= self.dim {
                return Err(config_err(format!(
                    "functional f{i} needs i < dim = {}",
                    self.dim
                )));
            }
        }
        let model = self.effective_model();
        let allowed: &[Model] = match self.experiment {
            ExperimentKind::Coupling => &[Model::Coupled],
            ExperimentKind::PoissonVsUniform => &[Model::Uniform],
            _ => &[Model::Uniform, Model::Poisson],
        };
        if !allowed.contains(&model) {
            return Err(config_err(format!(
                "model {model:?} is not available for {}",
                self.experiment
            )));
        }
        if self.workers == Some(0) {
            return Err(config_err("workers must be at least 1"));
        }
        self.constants.validate(self)
    }
}

impl Constants {
    fn validate(&self, cfg: &ExperimentConfig) -> Result<()> {
        let positive = [
            ("nu", self.nu),
            ("c0", self.c0),
            ("typical_c", self.typical_c),
            ("c3", self.c3),
            ("c4", self.c4),
            ("c5", self.c5),
            ("c6", self.c6),
            ("c7", self.c7),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(config_err(format!("constant {name} must be positive, got {v}")));
            }
        }
        if !(self.a.is_finite() && self.a >= 0.0) {
            return Err(config_err(format!("constant a must be non-negative, got {}", self.a)));
        }
        if !(self.wide_decay.is_finite() && self.wide_decay >= 0.0) {
            return Err(config_err("constant wide_decay must be non-negative"));
        }
        if !(self.tail_min_lambda.is_finite() && self.tail_min_lambda >= 0.0) {
            return Err(config_err("tail_min_lambda must be non-negative"));
        }
        if let Some(c2) = self.c2 {
            if !(c2.is_finite() && c2 > 0.0) {
                return Err(config_err(format!("constant c2 must be positive, got {c2}")));
            }
        }
        if let Some(grid) = &self.lambda_grid {
            if grid.len() < 2
                || grid.iter().any(|l| !(l.is_finite() && *l >= 0.0))
                || grid.windows(2).any(|w| w[1] <= w[0])
            {
                return Err(config_err(
                    "lambda_grid must hold at least two increasing non-negative values",
                ));
            }
        }
        let counts = [
            ("g_probes", self.g_probes),
            ("g_samples", self.g_samples),
            ("wet_samples", self.wet_samples),
            ("probes", self.probes),
            ("wide_samples", self.wide_samples),
            ("audit_points", self.audit_points),
            ("audit_proposals", self.audit_proposals),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(config_err(format!("{name} must be at least 1")));
            }
        }
        if self.bootstrap_resamples < 10 {
            return Err(config_err("bootstrap_resamples must be at least 10"));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(config_err("confidence must lie in (0, 1)"));
        }
        if self.cover_audit && cfg.dim > 3 {
            return Err(config_err("the cap-cover audit supports dim 2 and 3 only"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"experiment": "clt", "body": "ball", "dim": 2,
        "n_grid": [100, 200], "trials": 10}"#;

    #[test]
    fn parses_with_defaults() {
        let c = ExperimentConfig::from_json(MINIMAL).unwrap();
        assert_eq!(c.functional, Functional::Volume);
        assert_eq!(c.effective_model(), Model::Uniform);
        assert_eq!(c.constants.nu, 5.0);
        assert_eq!(c.constants.a, 4.0);
        assert_eq!(c.constants.c0, 5.0);
        assert_eq!(c.master_seed, 0);
    }

    #[test]
    fn unknown_fields_are_errors() {
        let bad = MINIMAL.replace("\"trials\"", "\"trails\": 3, \"trials\"");
        assert!(matches!(ExperimentConfig::from_json(&bad), Err(Error::Config(_))));
        let bad = MINIMAL.replace("\"trials\": 10", "\"trials\": 10, \"constants\": {\"mu\": 1}");
        assert!(matches!(ExperimentConfig::from_json(&bad), Err(Error::Config(_))));
    }

    #[test]
    fn validation() {
        let cases = [
            MINIMAL.replace("[100, 200]", "[200, 100]"),
            MINIMAL.replace("[100, 200]", "[100, 100]"),
            MINIMAL.replace("[100, 200]", "[]"),
            MINIMAL.replace("\"trials\": 10", "\"trials\": 1"),
            MINIMAL.replace("\"trials\": 10", "\"trials\": 0"),
            MINIMAL.replace("\"dim\": 2", "\"dim\": 9"),
            MINIMAL.replace("\"trials\": 10", "\"trials\": 10, \"functional\": \"f2\""),
            MINIMAL.replace("\"trials\": 10", "\"trials\": 10, \"functional\": \"area\""),
            MINIMAL.replace("\"trials\": 10", "\"trials\": 10, \"model\": \"coupled\""),
            MINIMAL.replace("\"ball\"", "\"ellipsoid\""),
            MINIMAL.replace("\"trials\": 10", "\"trials\": 10, \"workers\": 0"),
            MINIMAL.replace("\"trials\": 10", "\"trials\": 10, \"constants\": {\"nu\": -1}"),
        ];
        for c in cases {
            assert!(matches!(ExperimentConfig::from_json(&c), Err(Error::Config(_))), "{c}");
        }
        let ok = MINIMAL.replace("\"ball\"", "\"ellipsoid\", \"body_params\": [1, 2]");
        assert!(ExperimentConfig::from_json(&ok).is_ok());
        let ok = MINIMAL.replace("\"trials\": 10", "\"trials\": 10, \"functional\": \"f_1\"");
        assert_eq!(ExperimentConfig::from_json(&ok).unwrap().functional, Functional::Faces(1));
    }

    #[test]
    fn echo_drops_run_only_fields() {
        let mut c = ExperimentConfig::from_json(MINIMAL).unwrap();
        c.workers = Some(3);
        c.raw = true;
        let e = c.echo();
        assert_eq!(e.workers, None);
        assert!(!e.raw);
        let text = serde_json::to_string(&e).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), e);
    }
}
