//! End-to-end tests of the `nplab` binary: flags, formats, exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn nplab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nplab"))
}

fn run(args: &[&str]) -> Output {
    nplab().args(args).output().expect("binary runs")
}

fn build_cache_file(dir: &Path, limit: &str) -> PathBuf {
    let path = dir.join(format!("p{limit}.nplc"));
    let out = run(&[
        "cache",
        "build",
        "--limit",
        limit,
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    path
}

#[test]
fn cache_build_and_info() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_cache_file(dir.path(), "1000000");
    let out = run(&["cache", "info", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("limit: 1000000"), "{text}");
    assert!(text.contains("count: 78498"), "{text}");
}

#[test]
fn cache_info_missing_file_is_exit_2() {
    let out = run(&["cache", "info", "/nonexistent/never.nplc"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn cache_build_over_budget_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("huge.nplc");
    let out = run(&[
        "cache",
        "build",
        "--limit",
        "1e12",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    assert!(!path.exists());
}

#[test]
fn scan_single_point_matches_module_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_cache_file(dir.path(), "100000");
    let out = run(&[
        "scan",
        "--cache",
        path.to_str().unwrap(),
        "--range",
        "10:10",
        "--grid",
        "log:1",
        "--tol",
        "1e-4",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), nplab::rows::CSV_HEADER);
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|f| f.parse().unwrap())
        .collect();
    let header: Vec<&str> = nplab::rows::CSV_HEADER.split(',').collect();
    let col = |name: &str| row[header.iter().position(|&h| h == name).unwrap()];
    assert_eq!(col("x"), 10.0);
    assert!((col("theta") - 5.347_107_530_717_468_6).abs() < 1e-9);
    assert!((col("phi") - (-22.879_616_525_507_228)).abs() < 1e-9);
    assert!((col("Q") - 0.381_949_305_047_22).abs() < 1e-6);
    assert!((col("A") - 2.781_130_787_972_413).abs() < 1e-5);
    assert!(col("F") <= 0.0);
    assert!(col("residual").abs() <= col("residual_err"));
}

#[test]
fn scan_log_grid_has_requested_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_cache_file(dir.path(), "100000");
    let out = run(&[
        "scan",
        "--cache",
        path.to_str().unwrap(),
        "--range",
        "1e3:1e5",
        "--grid",
        "log:5",
        "--tol",
        "1e-4",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    let xs: Vec<f64> = rows
        .iter()
        .map(|r| r.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(xs.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(xs[0], 1e3);
    assert_eq!(xs[4], 1e5);
}

#[test]
fn scan_workers_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_cache_file(dir.path(), "100000");
    let mut outputs = Vec::new();
    for workers in ["1", "8"] {
        let file = dir.path().join(format!("scan{workers}.csv"));
        let out = run(&[
            "scan",
            "--cache",
            path.to_str().unwrap(),
            "--range",
            "1e3:1e4",
            "--grid",
            "log:200",
            "--tol",
            "1e-4",
            "--workers",
            workers,
            "--out",
            file.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        outputs.push(std::fs::read(&file).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn scan_full_density_emits_every_gap_endpoint() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_cache_file(dir.path(), "100000");
    let out = run(&[
        "scan",
        "--cache",
        path.to_str().unwrap(),
        "--range",
        "10:100",
        "--full",
        "--tol",
        "1e-4",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = String::from_utf8(out.stdout).unwrap().lines().count() - 1;
    // 21 primes in (10, 100], two endpoints each, plus the range ends
    assert_eq!(rows, 2 * 21 + 2);
}

#[test]
fn scan_json_rows_parse_and_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_cache_file(dir.path(), "100000");
    let out = run(&[
        "scan",
        "--cache",
        path.to_str().unwrap(),
        "--range",
        "100:200",
        "--grid",
        "log:3",
        "--tol",
        "1e-4",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    for line in String::from_utf8(out.stdout).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in nplab::rows::CSV_HEADER.split(',') {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn scan_budget_exit_3_and_no_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_cache_file(dir.path(), "100000");
    let outfile = dir.path().join("never.csv");
    let out = run(&[
        "scan",
        "--cache",
        path.to_str().unwrap(),
        "--range",
        "10:100",
        "--grid",
        "log:3",
        "--tol",
        "1e-9",
        "--out",
        outfile.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("required"));
    assert!(!outfile.exists(), "partial output must not be left behind");
}

#[test]
fn check_koch_passes_and_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_cache_file(dir.path(), "1000000");
    let out = run(&[
        "check",
        "koch_22iii",
        "--cache",
        path.to_str().unwrap(),
        "--range",
        "1e3:1e6",
        "--format",
        "json",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["check_id"], "koch_22iii");
    assert_eq!(report["violation_count"], 0);
    assert!(report["extrema"][0]["max"].as_f64().unwrap() < 1.0);
}

#[test]
fn check_ingham_reports_onset_and_small_x_violations() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_cache_file(dir.path(), "1000000");
    let out = run(&[
        "check",
        "ingham_prop4",
        "--cache",
        path.to_str().unwrap(),
        "--range",
        "10:1e6",
        "--format",
        "json",
    ]);
    // violations at small x but an onset exists, so exit 0
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["violation_count"].as_u64().unwrap() > 0);
    let onset = report["onset"].as_f64().unwrap();
    assert!(onset < 1e3, "onset {onset}");
}

#[test]
fn check_narrow_a_violations_persisting_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_cache_file(dir.path(), "100000");
    // at x = 10 the scaled remainder sits above the window; single point
    let out = run(&[
        "check",
        "narrow_A_18",
        "--cache",
        path.to_str().unwrap(),
        "--range",
        "10:10",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_check_is_exit_2_with_usage() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_cache_file(dir.path(), "100000");
    let out = run(&[
        "check",
        "mystery_check",
        "--cache",
        path.to_str().unwrap(),
        "--range",
        "10:100",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("known checks"), "{err}");
}

#[test]
fn decompose_prints_flagged_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_cache_file(dir.path(), "100000");
    let out = run(&[
        "decompose",
        "--x",
        "1000",
        "--cache",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["e_tail_rh_conditional"], true);
    let residual = v["residual"].as_f64().unwrap().abs();
    assert!(residual <= v["residual_err"].as_f64().unwrap());
}

#[test]
fn decompose_max_rel_e_budget_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_cache_file(dir.path(), "100000");
    let out = run(&[
        "decompose",
        "--x",
        "10",
        "--cache",
        path.to_str().unwrap(),
        "--max-rel-e",
        "1e-9",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("horizon"));
}

#[test]
fn env_cache_dir_is_used_when_no_flags() {
    let dir = tempfile::tempdir().unwrap();
    // pre-build a cache in the env dir under the conventional name
    let conventional = dir.path().join("nplc-1000.nplc");
    let out = run(&[
        "cache",
        "build",
        "--limit",
        "1000",
        "--out",
        conventional.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = nplab()
        .env("NPLAB_CACHE_DIR", dir.path())
        .args(["check", "robin_13", "--limit", "1000", "--range", "100:999"])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // and the flag overrides: pointing at a missing file must fail
    let out = nplab()
        .env("NPLAB_CACHE_DIR", dir.path())
        .args([
            "check",
            "robin_13",
            "--cache",
            dir.path().join("missing.nplc").to_str().unwrap(),
            "--limit",
            "1000",
            "--range",
            "100:999",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
