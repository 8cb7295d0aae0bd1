use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use wegner_core::transform::build_monomial_coefficients;
use wegner_core::CompactPotential;
use wegner_lab::coeffs::parse_field;

fn lab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wegner-lab"))
        .args(args)
        .env("WEGNER_LAB_OUT_DIR", out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn files_with_ext(dir: &Path, ext: &str) -> Vec<std::path::PathBuf> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == ext))
        .collect();
    v.sort();
    v
}

#[test]
fn transform_verify_reports_telescoping_minimum() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["preset", "dipole-transform-1d"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(report["status"], "pass");
    assert_eq!(report["summary"], "min combination = 1, δ = 1");

    let coeffs = files_with_ext(dir.path(), "coeffs");
    assert_eq!(coeffs.len(), 1);
    let field = parse_field(&fs::read_to_string(&coeffs[0]).unwrap()).unwrap();
    let expected = build_monomial_coefficients(&CompactPotential::from_profile(&[1, -1]).unwrap(), 20).unwrap();
    assert_eq!(field, expected);
}

#[test]
fn missing_density_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(
        &config,
        "kind = \"bound-check\"\ndim = 1\nside = 4\nepsilons = [0.1]\nenergy = 0.0\n\n[potential]\nkind = \"profile\"\nvalues = [\"1\"]\n",
    )
    .unwrap();
    let o = lab(&["run", config.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("density"));
}

#[test]
fn unparsable_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(&config, "kind = \"bound-check\"\ndim = ").unwrap();
    assert_eq!(lab(&["run", config.to_str().unwrap()], dir.path()).status.code(), Some(2));
    assert_eq!(lab(&["run", "/nonexistent.toml"], dir.path()).status.code(), Some(2));
}

#[test]
fn unknown_preset_lists_available() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["preset", "no-such-thing"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("diag-oracle-1d") && err.contains("large-disorder-L3"), "{err}");
}

#[test]
fn emitted_preset_runs_identically() {
    let dir = tempfile::tempdir().unwrap();
    let emitted = lab(&["preset", "diag-oracle-1d", "--emit", "--samples", "300"], dir.path());
    assert_eq!(emitted.status.code(), Some(0));
    let path = dir.path().join("oracle.toml");
    fs::write(&path, stdout(&emitted)).unwrap();
    let a = lab(&["run", path.to_str().unwrap()], dir.path());
    let b = lab(&["preset", "diag-oracle-1d", "--samples", "300"], dir.path());
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let ra: serde_json::Value = serde_json::from_str(stdout(&a).trim()).unwrap();
    let rb: serde_json::Value = serde_json::from_str(stdout(&b).trim()).unwrap();
    assert_eq!(ra["config_hash"], rb["config_hash"]);
    assert_eq!(ra["summary"], rb["summary"]);
}

#[test]
fn reruns_append_identical_records() {
    let dir = tempfile::tempdir().unwrap();
    for _ in 0..2 {
        let o = lab(&["preset", "diag-oracle-1d", "--samples", "200", "--seed", "7"], dir.path());
        assert_eq!(o.status.code(), Some(0));
    }
    let files = files_with_ext(dir.path(), "jsonl");
    assert_eq!(files.len(), 2);
    assert_eq!(fs::read(&files[0]).unwrap(), fs::read(&files[1]).unwrap());
    let line = fs::read_to_string(&files[0]).unwrap();
    let record: serde_json::Value = serde_json::from_str(line.lines().next().unwrap()).unwrap();
    assert_eq!(record["schema"], "wegner-record/1");
    assert_eq!(record["master_seed"], 7);
    assert_eq!(record["n_samples"], 200);
}

#[test]
fn csv_output_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("explicit");
    let o = lab(
        &["--format", "csv", "--out", target.to_str().unwrap(), "preset", "diag-oracle-1d", "--samples", "100"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let files = files_with_ext(&target, "csv");
    assert_eq!(files.len(), 1);
    let text = fs::read_to_string(&files[0]).unwrap();
    assert!(text.starts_with("schema,experiment,statistic,"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn failed_assertion_exits_1_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let emitted = stdout(&lab(&["preset", "diag-oracle-1d", "--emit"], dir.path()));
    let path = dir.path().join("wrong.toml");
    fs::write(&path, emitted.replace("expected = [3.0]", "expected = [5.0]")).unwrap();
    let o = lab(&["run", path.to_str().unwrap(), "--samples", "500"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(report["status"], "fail");
    let failed: Vec<_> = report["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["name"], "oracle[ε=0.15]");
}

#[test]
fn positivity_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("window.toml");
    // the window construction on a zero-mean potential is rejected as a config error
    fs::write(
        &path,
        "kind = \"transform-verify\"\ndim = 1\nside = 5\nconstruction = \"corollary-window\"\n\n[potential]\nkind = \"profile\"\nvalues = [\"1\", \"-1\"]\n",
    )
    .unwrap();
    assert_eq!(lab(&["run", path.to_str().unwrap()], dir.path()).status.code(), Some(2));
}
