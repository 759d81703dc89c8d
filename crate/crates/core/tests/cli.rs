//! The `rpoly` binary: outputs, exit codes and determinism.

use std::path::Path;
use std::process::{Command, Output};

fn rpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rpoly")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const SMALL: &str = r#"{"experiment":"variance_scaling","body":"ball","dim":2,
    "n_grid":[50,100,200],"trials":40,"master_seed":3}"#;

#[test]
fn run_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", SMALL);
    let out = dir.path().join("out");
    let o = rpoly(&["run", &cfg, "--out", out.to_str().unwrap(), "--raw"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 4);
    assert!(summary.starts_with("n,trials,mean,"));
    let raw = std::fs::read_to_string(out.join("raw.csv")).unwrap();
    assert_eq!(raw.lines().count(), 1 + 3 * 40);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["experiment"], "variance_scaling");
    assert_eq!(report["failed_trials"], 0);
    assert!(out.join("runtime.json").exists());
}

#[test]
fn raw_is_optional() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", SMALL);
    let out = dir.path().join("out");
    assert_eq!(rpoly(&["run", &cfg, "--out", out.to_str().unwrap()]).status.code(), Some(0));
    assert!(!out.join("raw.csv").exists());
}

#[test]
fn output_is_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", SMALL);
    let mut reports = Vec::new();
    for w in ["1", "3"] {
        let out = dir.path().join(format!("w{w}"));
        let o = rpoly(&["run", &cfg, "--out", out.to_str().unwrap(), "--workers", w]);
        assert_eq!(o.status.code(), Some(0));
        reports.push((
            std::fs::read(out.join("report.json")).unwrap(),
            std::fs::read(out.join("summary.csv")).unwrap(),
        ));
    }
    assert!(reports[0] == reports[1]);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("malformed.json", "{not json"),
        ("unknown.json", r#"{"experiment":"clt","body":"ball","dim":2,"n_grid":[50],"trials":5,"colour":1}"#),
        ("order.json", r#"{"experiment":"clt","body":"ball","dim":2,"n_grid":[100,50],"trials":5}"#),
        ("face.json", r#"{"experiment":"clt","body":"ball","dim":2,"n_grid":[50],"trials":5,"functional":"f2"}"#),
        ("kind.json", r#"{"experiment":"nope","body":"ball","dim":2,"n_grid":[50],"trials":5}"#),
    ];
    for (name, text) in cases {
        let cfg = write(dir.path(), name, text);
        for cmd in ["run", "validate"] {
            let o = rpoly(&[cmd, &cfg, "--out", dir.path().join("o").to_str().unwrap()][..if cmd == "run" { 4 } else { 2 }]);
            assert_eq!(o.status.code(), Some(2), "{cmd} {name}: {}", String::from_utf8_lossy(&o.stderr));
        }
    }
    let missing = dir.path().join("missing.json");
    assert_eq!(rpoly(&["validate", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(rpoly(&["run", "--workers", "0", &write(dir.path(), "ok.json", SMALL)]).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", SMALL);
    // The output path is an existing file, so the report cannot be written.
    let blocker = write(dir.path(), "blocker", "");
    assert_eq!(rpoly(&["run", &cfg, "--out", &blocker]).status.code(), Some(3));
    // eps* = nu ln n / n exceeds 1/2 at this n.
    let cfg = write(
        dir.path(),
        "eps.json",
        r#"{"experiment":"floating_and_wide","body":"ball","dim":2,"n_grid":[20],"trials":2,"constants":{"nu":50}}"#,
    );
    let out = dir.path().join("o2");
    assert_eq!(rpoly(&["run", &cfg, "--out", out.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn lists_and_validates() {
    let o = rpoly(&["list-experiments"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    for name in ["clt", "variance_scaling", "expectation", "coupling", "poisson_vs_uniform", "tail", "floating_and_wide"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for entry in std::fs::read_dir(configs).unwrap() {
        let path = entry.unwrap().path();
        let o = rpoly(&["validate", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{path:?}");
    }
    assert_eq!(rpoly(&["bogus"]).status.code(), Some(2));
}
