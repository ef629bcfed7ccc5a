use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pwbasis"))
}

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

/// Report text without the wall-time line.
fn strip_wall_time(text: &str) -> String {
    text.lines().filter(|l| !l.contains("\"wall_time_ms\"")).collect::<Vec<_>>().join("\n")
}

#[test]
fn wsk_scenario_passes_and_reports_orthonormal() {
    let s = scenarios().join("01_wsk_bounds.json");
    let out = run(&["bounds", "--scenario", s.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["passed"], true);
    assert_eq!(r["results"]["orthonormal"]["orthonormal"], true);
    assert_eq!(r["results"]["order"], 7);
    assert!(r["hypotheses"].as_array().unwrap().iter().any(|h| h["name"] == "unit measure" && h["passed"] == true));
    assert_eq!(r["tool"]["name"], "pwbasis");
    assert!(r["wall_time_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn unknown_key_is_a_schema_error_naming_every_path() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(
        dir.path(),
        "bad.json",
        r#"{"name": "bad", "command": "bounds", "parameters": {
            "omega_set": [0, 1],
            "domain": {"boxes": [[0, 1]], "shape": "box"},
            "freqs": {"range": [0, "x"]}
        }}"#,
    );
    let out = run(&["bounds", "--scenario", s.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parameters.omega_set: unknown key"), "{err}");
    assert!(err.contains("parameters.domain.shape: unknown key"), "{err}");
    assert!(err.contains("parameters.freqs.range[1]"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn affine_transfer_records_positive_margins() {
    let s = scenarios().join("04_affine_transfer.json");
    let out = run(&["transfer", "--scenario", s.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let res = &r["results"];
    assert!(res["lower_margin"].as_f64().unwrap() > 0.0);
    assert!(res["upper_margin"].as_f64().unwrap() > 0.0);
    // Exponentials are orthonormal here, so the predictions are (1/2)^2 and (3/2)^2.
    assert!((res["predicted_lower"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!((res["predicted_upper"].as_f64().unwrap() - 2.25).abs() < 1e-12);
    assert_eq!(res["relative_tolerance"].as_f64().unwrap(), 1e-8);
}

#[test]
fn batch_with_a_false_claim_fails() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(scenarios().join("01_wsk_bounds.json"), dir.path().join("a_wsk.json")).unwrap();
    write(
        dir.path(),
        "b_half_integer.json",
        r#"{"name": "half-integer", "command": "bounds", "parameters": {
            "domain": {"boxes": [[-0.5, 0.5]]}, "freqs": [0, 0.5], "claim": "orthonormal"}}"#,
    );
    let out_dir = dir.path().join("reports");
    let out = run(&["batch", "--scenario", dir.path().to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let summary = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], "file,name,command,verdict,key_numbers,message");
    assert!(lines[1].starts_with("a_wsk.json,wsk-orthonormal,bounds,pass"));
    assert!(lines[2].starts_with("b_half_integer.json,half-integer,bounds,fail"));
    assert!(lines[2].contains("failed: orthonormal"));
    assert_eq!(std::fs::read_to_string(out_dir.join("summary.csv")).unwrap(), summary);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("b_half_integer.json")).unwrap()).unwrap();
    let dev = r["results"]["orthonormal"]["max_deviation"].as_f64().unwrap();
    assert!((dev - 2.0 / std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn empty_directory_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["batch", "--scenario", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn schema_errors_in_a_batch_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(scenarios().join("01_wsk_bounds.json"), dir.path().join("a.json")).unwrap();
    write(dir.path(), "b.json", r#"{"name": "x", "command": "bounds"}"#);
    let out = run(&["batch", "--scenario", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("b.json,,,error"));
}

#[test]
fn shipped_scenarios_all_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["batch", "--scenario", scenarios().to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let summary = String::from_utf8_lossy(&out.stdout);
    assert_eq!(summary.lines().count(), 13);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 13);
}

#[test]
fn batch_reports_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = run(&["batch", "--scenario", scenarios().to_str().unwrap(), "--out", d.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    for entry in std::fs::read_dir(a.path()).unwrap() {
        let name = entry.unwrap().file_name();
        let x = std::fs::read_to_string(a.path().join(&name)).unwrap();
        let y = std::fs::read_to_string(b.path().join(&name)).unwrap();
        assert_eq!(strip_wall_time(&x), strip_wall_time(&y), "{name:?}");
    }
}

#[test]
fn seed_override_changes_random_signals_only() {
    let s = scenarios().join("12_factorization_random.json");
    let s = s.to_str().unwrap();
    let first = report(&run(&["factorization", "--scenario", s, "--seed", "1"]));
    let again = report(&run(&["factorization", "--scenario", s, "--seed", "1"]));
    let other = report(&run(&["factorization", "--scenario", s, "--seed", "2"]));
    assert_eq!(first["scenario"]["seed"], 1);
    assert_eq!(first["results"]["signals"], again["results"]["signals"]);
    assert_ne!(first["results"]["signals"], other["results"]["signals"]);
    assert_eq!(other["passed"], true);
}

#[test]
fn subcommand_must_match_the_scenario() {
    let s = scenarios().join("01_wsk_bounds.json");
    let out = run(&["gabor", "--scenario", s.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("is a \"bounds\" scenario"));
}

#[test]
fn sample_curve_as_csv() {
    let s = scenarios().join("09_wsk_sample.json");
    let out = run(&["sample", "--scenario", s.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "truncation,max_abs_error,relative_l2_error,coefficient_energy,tail_energy");
    assert_eq!(lines.len(), 5);
    assert!(lines[4].starts_with("64,"));
}

#[test]
fn report_file_is_written_and_stdout_stays_empty() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("gabor.json");
    let s = scenarios().join("10_gabor_wsk.json");
    let out = run(&["gabor", "--scenario", s.to_str().unwrap(), "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(r["results"]["order"], 9);
    assert_eq!(r["results"]["pairs"][1], serde_json::json!([[0.0], [-1.0]]));
}

#[test]
fn tolerance_override_is_recorded_and_applied() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(
        dir.path(),
        "near.json",
        r#"{"name": "near", "command": "bounds", "parameters": {
            "domain": {"boxes": [[-0.5, 0.5]]}, "freqs": [0, 0.999], "claim": "orthonormal"}}"#,
    );
    let strict = run(&["bounds", "--scenario", s.to_str().unwrap()]);
    assert_eq!(strict.status.code(), Some(1));
    let loose = run(&["bounds", "--scenario", s.to_str().unwrap(), "--tol", "0.01"]);
    assert_eq!(loose.status.code(), Some(0));
    assert_eq!(report(&loose)["tolerance_override"].as_f64(), Some(0.01));
}

#[test]
fn vanishing_weight_points_to_the_frame_transfer() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(
        dir.path(),
        "vanish.json",
        r#"{"name": "vanish", "command": "transfer", "parameters": {
            "domain": {"boxes": [[0, 1]]}, "freqs": {"range": [0, 2]},
            "weight": {"profile": "affine", "offset": 0, "slope": 1, "nodes": 4}}}"#,
    );
    // Node moduli are positive, the exact infimum is zero.
    let out = run(&["transfer", "--scenario", s.to_str().unwrap()]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(2), "{err}");
    assert!(err.contains("frame transfer"), "{err}");
}

#[test]
fn missing_scenario_file_is_a_usage_error() {
    let out = run(&["bounds", "--scenario", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bounds"]);
    assert_eq!(out.status.code(), Some(2));
}
