use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use super::config::{ExperimentConfig, ExperimentKind};
use super::details::Details;
use crate::stats::{LineFit, Summary};
use crate::{Error, Result};

/// Per-n summary of the primary per-trial value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NRow {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub mean_stderr: f64,
    pub var: f64,
    pub var_stderr: f64,
    /// Absolute central moments of orders 3 to 6.
    pub m3: f64,
    pub m4: f64,
    pub m5: f64,
    pub m6: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    /// KS distance of the standardized values to the normal law.
    pub ks: Option<f64>,
}

impl NRow {
    pub fn new(n: usize, s: &Summary, ks: Option<f64>) -> Self {
        NRow {
            n,
            trials: s.count,
            mean: s.mean,
            mean_stderr: s.mean_stderr,
            var: s.variance,
            var_stderr: s.variance_stderr,
            m3: s.abs_moments[0],
            m4: s.abs_moments[1],
            m5: s.abs_moments[2],
            m6: s.abs_moments[3],
            skewness: s.skewness,
            kurtosis: s.kurtosis,
            ks,
        }
    }
}

/// A log-log fit `ln y = intercept + slope ln n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedFit {
    pub name: String,
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// The exponent predicted by the asymptotic theory, when there is one.
    pub expected_slope: Option<f64>,
}

impl NamedFit {
    pub fn new(name: &str, fit: &LineFit, expected: Option<f64>) -> Self {
        NamedFit {
            name: name.to_string(),
            slope: fit.slope,
            slope_stderr: fit.slope_stderr,
            intercept: fit.intercept,
            r_squared: fit.r_squared,
            expected_slope: expected,
        }
    }
}

/// Per-trial values written to `raw.csv`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawTable {
    pub columns: Vec<String>,
    /// `(n, trial, values)`.
    pub rows: Vec<(usize, usize, Vec<f64>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub experiment: ExperimentKind,
    pub config: ExperimentConfig,
    pub failed_trials: usize,
    /// The first few trial errors, if any.
    pub errors: Vec<String>,
    pub rows: Vec<NRow>,
    pub fits: Vec<NamedFit>,
    pub details: Details,
    #[serde(skip)]
    pub raw: RawTable,
}

impl Report {
    pub fn fit(&self, name: &str) -> Option<&NamedFit> {
        self.fits.iter().find(|f| f.name == name)
    }

    /// `report.json` as bytes.
    pub fn to_json(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17(PrettyFormatter::new()));
        self.serialize(&mut ser)?;
        out.push(b'\n');
        Ok(out)
    }

    /// `summary.csv`: one row per n.
    pub fn summary_csv(&self) -> String {
        let primary = self.fits.first();
        let mut s = String::from(
            "n,trials,mean,mean_stderr,var,var_stderr,M3,M4,M5,M6,ks,slope_name,slope,slope_stderr,expected_slope\n",
        );
        for r in &self.rows {
            let cells = [
                r.n.to_string(),
                r.trials.to_string(),
                fmt_f64(r.mean),
                fmt_f64(r.mean_stderr),
                fmt_f64(r.var),
                fmt_f64(r.var_stderr),
                fmt_f64(r.m3),
                fmt_f64(r.m4),
                fmt_f64(r.m5),
                fmt_f64(r.m6),
                r.ks.map(fmt_f64).unwrap_or_default(),
                primary.map(|f| f.name.clone()).unwrap_or_default(),
                primary.map(|f| fmt_f64(f.slope)).unwrap_or_default(),
                primary.map(|f| fmt_f64(f.slope_stderr)).unwrap_or_default(),
                primary
                    .and_then(|f| f.expected_slope)
                    .map(fmt_f64)
                    .unwrap_or_default(),
            ];
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    /// `raw.csv`: `n, trial` and the per-trial values.
    pub fn raw_csv(&self) -> String {
        let mut s = String::from("n,trial");
        for c in &self.raw.columns {
            s.push(',');
            s.push_str(c);
        }
        s.push('\n');
        for (n, t, vals) in &self.raw.rows {
            s.push_str(&format!("{n},{t}"));
            for v in vals {
                s.push(',');
                s.push_str(&fmt_f64(*v));
            }
            s.push('\n');
        }
        s
    }

    /// Writes `report.json`, `summary.csv` and, with `raw`, `raw.csv`.
    pub fn write_to(&self, dir: &Path, raw: bool) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json()?)?;
        std::fs::write(dir.join("summary.csv"), self.summary_csv())?;
        if raw {
            std::fs::write(dir.join("raw.csv"), self.raw_csv())?;
        }
        Ok(())
    }

    pub fn from_json(bytes: &[u8]) -> Result<Report> {
        serde_json::from_slice(bytes).map_err(Error::from)
    }
}

/// 17 significant digits in scientific notation; `NaN` and infinities as
/// their names (CSV only; JSON writes them as `null`).
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

/// Pretty JSON with every float at 17 significant digits.
struct Sig17<'a>(PrettyFormatter<'a>);

impl Formatter for Sig17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(fmt_f64(v).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}
