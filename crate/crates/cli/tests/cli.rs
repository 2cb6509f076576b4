use std::path::Path;
use std::process::{Command, Output};

use pbcheck::output::parse_jsonl;

fn pbcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbcheck")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("suite.toml");
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn degenerate_swanson_angle_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[[models]]\nkind = \"swanson\"\ntheta = 0\n");
    let out = pbcheck(&["--config", &cfg, "--out", dir.path().join("out").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("theta"), "{err}");
    assert!(!dir.path().join("out").exists());
}

#[test]
fn unknown_check_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = pbcheck(&["--checks", "ladder,spectra", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("spectra"));
}

#[test]
fn diagnostics_alone_exit_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = pbcheck(&[
        "--checks",
        "riesz_diagnostic",
        "--models",
        "standard_ho,swanson",
        "--nmax",
        "6",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("0 passed, 0 failed, 4 diagnostic"), "{stdout}");
    assert!(dir.path().join("riesz_diagnostic.csv").exists());
    assert!(dir.path().join("riesz_diagnostic_trace.csv").exists());
}

#[test]
fn report_round_trips_through_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
seed = 3
checks = ["ladder", "biorthogonality", "nlpb"]

[caps]
ladder = 5
gram = 5

[[models]]
kind = "extended"
beta = [0.5, "2"]

[[models]]
kind = "nlpb"
epsilon = [0, 1, 3, 6]
metric = "random"
metric_seed = 9
"#,
    );
    let out_dir = dir.path().join("out");
    let out = pbcheck(&["--config", &cfg, "--out", out_dir.to_str().unwrap(), "-q"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());

    let text = std::fs::read_to_string(out_dir.join("report.jsonl")).unwrap();
    let reports = parse_jsonl(&text).unwrap();
    assert_eq!(reports.len(), 5);
    let mut again = String::new();
    for r in &reports {
        again.push_str(&serde_json::to_string(r).unwrap());
        again.push('\n');
    }
    assert_eq!(again, text);

    let cfg = pbcheck::SuiteConfig::load(Path::new(&cfg)).unwrap();
    cfg.validate().unwrap();
    let cells = pbcheck::run_suite(&cfg).unwrap();
    assert_eq!(cells.iter().map(|c| &c.report).cloned().collect::<Vec<_>>(), reports);
    assert!(std::fs::read_to_string(out_dir.join("summary.txt")).unwrap().contains("5 passed"));
}

#[test]
fn tightened_tolerances_fail_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = pbcheck(&[
        "--checks",
        "quadrature",
        "--models",
        "extended",
        "--nmax",
        "4",
        "--tolerance-scale",
        "1e-12",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}
