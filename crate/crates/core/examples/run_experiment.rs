//! Run a declarative experiment and print its summary table.
//!
//! Usage: `cargo run --release --example run_experiment [config.json]`

use rpoly::experiments::{self, ExperimentConfig};

const DEFAULT: &str = r#"{
    "experiment": "variance_scaling",
    "body": "ball",
    "dim": 2,
    "n_grid": [200, 400, 800, 1600],
    "trials": 400,
    "master_seed": 1
}"#;

fn main() -> rpoly::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => ExperimentConfig::from_file(path.as_ref())?,
        None => ExperimentConfig::from_json(DEFAULT)?,
    };
    let report = experiments::run(&cfg, experiments::default_workers())?;
    print!("{}", report.summary_csv());
    for fit in &report.fits {
        println!(
            "fit {}: slope {:.4} +- {:.4} (expected {:?})",
            fit.name, fit.slope, fit.slope_stderr, fit.expected_slope
        );
    }
    Ok(())
}
