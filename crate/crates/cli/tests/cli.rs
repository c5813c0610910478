//! File-level tests of the `subspec` binary: outputs, exit codes, golden files
//! and byte-level determinism.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_subspec");

fn problems() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../problems")
}

fn problem(name: &str) -> String {
    problems().join(name).to_string_lossy().into_owned()
}

/// Runs the binary with `--out <dir>` appended; returns the exit code.
fn run(args: &[&str], out: &Path) -> i32 {
    let status = Command::new(BIN)
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs");
    status.status.code().expect("exit code")
}

fn read(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

fn complexes(v: &Value) -> Vec<(f64, f64)> {
    v.as_array().unwrap().iter().map(|z| (z[0].as_f64().unwrap(), z[1].as_f64().unwrap())).collect()
}

#[test]
fn forward_free_dirichlet_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["forward", &problem("free_dirichlet.json"), "--eigs", "12"], dir.path()), 0);
    let s = read(&dir.path().join("spectrum.json"));
    let l = complexes(&s["lambdas"]);
    assert_eq!(l.len(), 12);
    for (n, (re, im)) in l.iter().enumerate() {
        assert!((re - (n as f64 + 0.5).powi(2)).abs() <= 1e-8 && im.abs() <= 1e-8, "{n}: {re}");
    }
    let c = read(&dir.path().join("cauchy.json"));
    assert_eq!(c["grid"]["cells"], 128);
    assert_eq!(c["j"].as_array().unwrap().len(), 129);
    assert_eq!(c["weyl"].as_array().unwrap().len(), 25);
}

#[test]
fn forward_step_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["forward", &problem("step_p1.json"), "--eigs", "12", "--grid", "64"], dir.path()), 0);
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/forward_step");
    for name in ["spectrum.json", "cauchy.json"] {
        let got = read(&dir.path().join(name));
        let want = read(&golden.join(name));
        assert_eq!(got["meta"], want["meta"], "{name}");
        assert_close(&got, &want, name);
    }
    // The golden eigenvalues are zeros of the characteristic function.
    let s = read(&golden.join("spectrum.json"));
    let wire = std::fs::read_to_string(problem("step_p1.json")).unwrap();
    let p: Value = serde_json::from_str(&wire).unwrap();
    let cells = p["sigma"]["samples"].as_array().unwrap().len() - 1;
    let case = &subspec::corpus::inverse_corpus()[0];
    let sigma = case.sigma_left(cells).unwrap();
    let f = case.entire_pair(cells).unwrap();
    let pair = case.pair();
    let delta = subspec::spectral::CharDelta::new(&sigma, &pair, &f);
    for (re, im) in complexes(&s["lambdas"]) {
        use subspec::spectral::Analytic;
        let l = subspec::C64::new(re, im);
        let scale = 1.0 + l.norm().powi(2);
        assert!(delta.value(l).unwrap().norm() <= 1e-8 * scale, "{l}");
    }
}

/// Structural equality with numbers compared to 1e-9 relative.
fn assert_close(a: &Value, b: &Value, path: &str) {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs())), "{path}: {x} vs {y}");
        }
        (Value::Array(x), Value::Array(y)) => {
            assert_eq!(x.len(), y.len(), "{path}");
            for (i, (p, q)) in x.iter().zip(y).enumerate() {
                assert_close(p, q, &format!("{path}[{i}]"));
            }
        }
        (Value::Object(x), Value::Object(y)) => {
            assert_eq!(x.keys().collect::<Vec<_>>(), y.keys().collect::<Vec<_>>(), "{path}");
            for (k, p) in x {
                assert_close(p, &y[k], &format!("{path}.{k}"));
            }
        }
        _ => assert_eq!(a, b, "{path}"),
    }
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"sigma\": 3").unwrap();
    assert_eq!(run(&["forward", bad.to_str().unwrap()], dir.path()), 2);
    std::fs::write(&bad, r#"{"f": {"kind": "closed_form_neumann_right"}, "p1": [2.0], "p2": [0.0]}"#).unwrap();
    assert_eq!(run(&["reconstruct", bad.to_str().unwrap()], dir.path()), 2);
    assert_eq!(run(&["forward", "/nonexistent/problem.json"], dir.path()), 2);
}

#[test]
fn reconstruct_round_trip_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rt");
    assert_eq!(run(&["reconstruct", &problem("step_p1.json")], &out), 0);
    let r = read(&out.join("report.json"));
    for k in ["rel_j", "rel_g", "abs_a"] {
        assert!(r["oracle_errors"][k].as_f64().unwrap() <= 1e-3, "{k}: {}", r["oracle_errors"]);
    }
    assert_eq!(r["report"]["warnings"].as_array().unwrap().len(), 0);
    let rec = read(&out.join("cauchy_recovered.json"));
    assert_eq!(rec["a"].as_array().unwrap().len(), 1);

    // Feeding forward's spectrum.json back in.
    let fwd = dir.path().join("fwd");
    assert_eq!(run(&["forward", &problem("zero_p2.json")], &fwd), 0);
    let out2 = dir.path().join("rt2");
    let spec = fwd.join("spectrum.json");
    assert_eq!(run(&["reconstruct", &problem("zero_p2.json"), spec.to_str().unwrap()], &out2), 0);
    let r = read(&out2.join("report.json"));
    assert!(r["oracle_errors"]["rel_j"].as_f64().unwrap() <= 1e-3);
    assert_eq!(r["meta"]["inputs"].as_array().unwrap().len(), 2);

    let starved = dir.path().join("starved");
    assert_eq!(run(&["reconstruct", &problem("step_p1.json"), "--eigs", "19", "--strict"], &starved), 4);
    assert!(starved.join("report.json").exists());
    assert_eq!(run(&["reconstruct", &problem("step_p1.json"), "--eigs", "19"], &starved), 0);

    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"lambdas": []}"#).unwrap();
    assert_eq!(run(&["reconstruct", &problem("step_p1.json"), empty.to_str().unwrap()], dir.path()), 2);
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("occupied");
    std::fs::write(&file, "x").unwrap();
    assert_eq!(run(&["diagnose", &problem("integer_sines.json")], &file), 1);
}

#[test]
fn hl_drop_rule_at_file_level() {
    let dir = tempfile::tempdir().unwrap();
    for drop in ["0", "1"] {
        let out = dir.path().join(format!("d{drop}"));
        assert_eq!(run(&["hl", &problem("hl_step_p1_r3.json"), "--drop", drop, "--eigs", "32", "--strict"], &out), 0);
        let r = read(&out.join("report.json"));
        assert_eq!(r["exclusion_count"], 1);
        for k in ["rel_j", "rel_g", "abs_a"] {
            assert!(r["oracle_errors"][k].as_f64().unwrap() <= 1e-3, "drop {drop} {k}");
        }
    }
    let out = dir.path().join("d2");
    assert_eq!(run(&["hl", &problem("hl_step_p1_r3.json"), "--drop", "2", "--eigs", "32", "--strict"], &out), 4);
    let r = read(&out.join("report.json"));
    let d = &r["diagnostics"];
    assert!(d["min_sv"].as_f64().unwrap() / d["max_sv"].as_f64().unwrap() < 1e-8);
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn stability_csv_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["stability", &problem("step_p1.json"), "--omega", "0,1e-3,1e-2", "--trials", "6", "--seed", "5"];
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(run(&args, &a), 0);
    assert_eq!(run(&args, &b), 0);
    for name in ["stability.csv", "stability_summary.json"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
    let rows = csv_rows(&a.join("stability.csv"));
    assert_eq!(rows[0], ["omega", "trial", "err_u", "err_J", "err_G", "err_A"]);
    assert_eq!(rows.len(), 1 + 18);
    for r in rows[1..].iter().filter(|r| r[0] == "0e0") {
        for x in &r[2..] {
            assert!(x.parse::<f64>().unwrap() <= 1e-12, "{r:?}");
        }
    }
    let s = read(&a.join("stability_summary.json"));
    let spread = s["median_ratio_spread"].as_f64().unwrap();
    assert!(spread <= 3.0, "{spread}");
    let c = dir.path().join("c");
    assert_eq!(run(&["stability", &problem("step_p1.json"), "--omega", "1e-3", "--trials", "6", "--seed", "6"], &c), 0);
    assert_ne!(std::fs::read(c.join("stability.csv")).unwrap(), std::fs::read(a.join("stability.csv")).unwrap());
}

#[test]
fn diagnose_examples() {
    let dir = tempfile::tempdir().unwrap();
    let ints = dir.path().join("ints");
    assert_eq!(run(&["diagnose", &problem("integer_sines.json")], &ints), 0);
    let d = read(&ints.join("diagnostics.json"));
    assert_eq!(d["class_s"]["passes"], true);
    for p in d["sine_family"].as_array().unwrap() {
        assert!((p["gram_cond"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    }
    assert!(d["xi_identity_residual"].as_f64().unwrap() <= 1e-8);

    let dup = dir.path().join("dup");
    assert_eq!(run(&["diagnose", &problem("duplicate.json")], &dup), 0);
    assert_eq!(read(&dup.join("diagnostics.json"))["class_s"]["passes"], false);

    let corpus = dir.path().join("corpus");
    assert_eq!(run(&["diagnose", &problem("step_p1.json")], &corpus), 0);
    let d = read(&corpus.join("diagnostics.json"));
    assert_eq!(d["moment_riesz_like"], true);
    let curve: Vec<f64> = d["moment_curve"].as_array().unwrap().iter().map(|p| p["gram_cond"].as_f64().unwrap()).collect();
    assert!(curve.windows(2).all(|w| w[1] >= w[0] && w[1] < 1e3), "{curve:?}");
}

#[test]
fn every_output_embeds_provenance() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["forward", &problem("free_neumann.json"), "--eigs", "6"], dir.path()), 0);
    let m = &read(&dir.path().join("spectrum.json"))["meta"];
    assert_eq!(m["tool"], "subspec");
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(m["grid"]["cells"], 128);
    assert_eq!(m["inputs"][0]["name"], "free_neumann.json");
    assert_eq!(m["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}
