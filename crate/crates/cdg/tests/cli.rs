//! End-to-end tests of the `cdg` binary: exit codes, text output, JSON
//! reports, and the complex-dump file layout.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cdg"))
        .args(args)
        .output()
        .expect("spawn cdg");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn tmp_path(stem: &str) -> PathBuf {
    std::env::temp_dir().join(format!(
        "cdg-cli-{stem}-{}",
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ))
}

#[test]
fn validate_accepts_good_category_and_module() {
    let (code, out, _) = run(&[
        "validate",
        &fixture("exterior.z.json"),
        "--module",
        &fixture("k.exterior.z.left.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("ok").count(), 2, "{out}");
}

#[test]
fn validate_rejects_broken_leibniz_with_exit_1() {
    let (code, out, _) = run(&["validate", &fixture("broken-leibniz.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("FAILED"), "{out}");
    assert!(out.contains("Leibniz"), "{out}");
}

#[test]
fn missing_file_is_exit_2() {
    let (code, _, err) = run(&["validate", &fixture("nosuchfile.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("parse error"), "{err}");
}

#[test]
fn usage_errors_are_exit_2_and_help_is_0() {
    let (code, _, _) = run(&["nosuchcmd"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["--help"]);
    assert_eq!(code, 0);
}

#[test]
fn first_kind_over_curved_base_is_exit_3() {
    let (code, _, err) = run(&["hh", &fixture("counterexample.q.json"), "--kind", "first"]);
    assert_eq!(code, 3);
    assert!(err.contains("unsupported"), "{err}");
}

#[test]
fn second_kind_tor_without_finite_resolution_is_exit_3() {
    let (code, _, err) = run(&[
        "tor",
        &fixture("exterior.z2.json"),
        &fixture("k.exterior.z.right.json"),
        &fixture("k.exterior.z2.left.json"),
        "--kind",
        "second",
    ]);
    assert_eq!(code, 3);
    assert!(err.contains("did not terminate"), "{err}");
}

#[test]
fn first_kind_tor_and_ext_report_honest_inconclusive() {
    let k_right = fixture("k.exterior.z.right.json");
    let k_left = fixture("k.exterior.z.left.json");
    let cat = fixture("exterior.z.json");
    let (code, out, _) = run(&["tor", &cat, &k_right, &k_left, "--kind", "first", "--truncate", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("method: Inconclusive"), "{out}");
    let (code, out, _) = run(&["ext", &cat, &k_left, &k_left, "--kind", "first", "--truncate", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("method: Inconclusive"), "{out}");
}

#[test]
fn resolve_reports_incomplete_with_exit_0() {
    let (code, out, _) = run(&[
        "resolve",
        &fixture("exterior.z.json"),
        &fixture("k.exterior.z.left.json"),
        "--max-depth",
        "4",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("incomplete at depth 4"), "{out}");
    assert!(out.contains("[4, 8, 12, 16, 20]"), "{out}");
}

#[test]
fn hh_json_report_round_trips() {
    let json = tmp_path("hh").with_extension("json");
    let (code, out, _) = run(&[
        "hh",
        &fixture("counterexample.q.json"),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("method: FiniteExact"), "{out}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["method"], "FiniteExact");
    assert_eq!(v["table"], serde_json::json!({"0": 1}));
    let _ = std::fs::remove_file(&json);
}

#[test]
fn compare_curvature_shift_is_equal() {
    let (code, out, _) = run(&[
        "compare",
        "curvature-shift",
        &fixture("counterexample.q.json"),
        "--shift",
        "2",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("envelope identity: holds"), "{out}");
    assert!(out.contains("verdict: EQUAL"), "{out}");
}

#[test]
fn compare_grading_pushforward_runs() {
    let (code, out, _) = run(&[
        "compare",
        "grading-pushforward",
        &fixture("exterior.z.json"),
        "--truncate",
        "4",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("bicomplex identity: holds"), "{out}");
}

#[test]
fn complex_dump_writes_manifest_and_matrices() {
    let dir = tmp_path("dump");
    let (code, out, _) = run(&[
        "complex-dump",
        &fixture("exterior.z.json"),
        "--builder",
        "bar",
        "--first",
        &fixture("k.exterior.z.right.json"),
        "--second",
        &fixture("k.exterior.z.left.json"),
        "--truncate",
        "4",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("identities: ok"), "{out}");
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["kind"], "bar");
    assert_eq!(manifest["truncation"], 4);
    let weights = manifest["weights"].as_array().unwrap();
    assert_eq!(weights.len(), 5);
    for m in manifest["maps"].as_array().unwrap() {
        let file = m["file"].as_str().unwrap();
        assert!(dir.join(file).is_file(), "missing {file}");
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn check_suite_small_run_passes() {
    let (code, out, _) = run(&[
        "check",
        "bicomplex-identities",
        "--cases",
        "3",
        "--truncate",
        "4",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("pass (3 cases"), "{out}");
}
