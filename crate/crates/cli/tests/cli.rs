use std::process::{Command, Output};

use serde_json::Value;

fn wcop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wcop")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn classify_examples() {
    let out = wcop(&["classify", "--map", "phi_p:0.5+0.5i", "--no-timestamp"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["analysis"]["class"]["tag"], "parabolic");
    assert_eq!(v["analysis"]["class"]["is_automorphism"], true);
    let (re, im) = complex(&v["analysis"]["denjoy_wolff"]);
    assert!((re - 1.0).abs() < 1e-12 && im.abs() < 1e-12);

    let v = json(&wcop(&["classify", "--map", "eq5:zeta=1,t=1"]));
    assert_eq!(v["analysis"]["class"]["tag"], "parabolic");
    let (t, _) = complex(&v["analysis"]["translation_number"]);
    assert!((t - 1.0).abs() < 1e-12);

    assert_eq!(json(&wcop(&["classify", "--map", "identity"]))["analysis"]["class"]["tag"], "identity");
}

#[test]
fn classify_errors() {
    assert_eq!(code(&wcop(&["classify", "--map", "phi_q:0.5"])), 2);
    assert_eq!(code(&wcop(&["classify", "--map", "lf:2,0,0,1"])), 3);
}

#[test]
fn cs_check_examples() {
    let out = wcop(&["cs-check", "--nf", "0.2,0.3", "--construct", "wj:0.5,0", "--conj", "wj:0.5,0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verdict"], true);

    let out = wcop(&["cs-check", "--nf", "0.2,0.3", "--construct", "wj:0.5,0", "--conj", "wj:0.3,0"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["verdict"], false);

    let out = wcop(&["cs-check", "--nf", "0.2+0.1i,0.3-0.2i,2", "--conj", "J"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["residual"].as_f64().unwrap() < 1e-12);

    let out = wcop(&["cs-check", "--map", "phi_p:0.4", "--psi", "psi_p:p=0.4", "--conj", "rot:0,1"]);
    assert_eq!(code(&out), 1);
    assert_eq!(code(&wcop(&["cs-check", "--map", "identity", "--conj", "wj:1.5,0"])), 2);
}

#[test]
fn construct_then_factor_round_trip() {
    let out = wcop(&["construct", "--nf", "0.2,0.3", "--conj", "rot:0,1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let phi = serde_json::to_string(&v["phi"]).unwrap();
    let psi = serde_json::to_string(&v["psi"]).unwrap();
    let out = wcop(&["factor", "--map", &phi, "--psi", &psi, "--conj", "rot:0,1"]);
    assert_eq!(code(&out), 0);
    let nf = &json(&out)["normal_form"];
    assert!((complex(&nf["a0"]).0 - 0.2).abs() < 1e-12);
    assert!((complex(&nf["a1"]).0 - 0.3).abs() < 1e-12);

    // A non-symmetric operator has no factor.
    assert_eq!(code(&wcop(&["factor", "--map", "lf:1,0.1i,0,2", "--conj", "J"])), 1);
}

#[test]
fn spectrum_point_set_passes() {
    let out = wcop(&["spectrum", "--thm", "3.4", "--p", "0.5", "--a0", "0.2", "--a1", "0.3", "--b", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["prediction"]["kind"], "point-set");
    assert_eq!(v["comparison"]["pass"], true);
    assert_eq!(v["comparison"]["pairs"].as_array().unwrap().len(), 5);
}

#[test]
fn spectrum_spiral_writes_eigencloud() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cloud.csv");
    let out = wcop(&[
        "spectrum", "--thm", "3.5", "--p", "0.5+0.5i", "--t", "1", "--psi0", "1", "--N", "64", "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["prediction"]["kind"], "spiral");
    assert!((v["prediction"]["radius"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert!(v.get("comparison").is_none());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im"));
    assert_eq!(lines.count(), 64);
}

#[test]
fn spectrum_disk_reports_both_radii() {
    let out = wcop(&["spectrum", "--thm", "3.6", "--p", "-0.5+0.5i", "--t", "1", "--N", "48"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["prediction"]["kind"], "disk");
    // The radius uses the derivative of the map itself; the closed-form
    // angle expression is reported alongside.
    assert!((v["prediction"]["radius"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    let angle = v["prediction"]["diagnostics"]["radius_with_angle_formula"].as_f64().unwrap();
    assert!((angle - 1.783810).abs() < 1e-6);
}

#[test]
fn spectrum_hypothesis_violations_exit_4() {
    let out = wcop(&["spectrum", "--thm", "3.5", "--p", "0.5", "--t", "1", "--psi0", "1"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("theorem 3.5"));
    assert_eq!(code(&wcop(&["spectrum", "--map", "eq5:zeta=1,t=1"])), 4);
    assert_eq!(code(&wcop(&["spectrum", "--thm", "9.9"])), 2);
}

#[test]
fn example24_contract() {
    assert_eq!(code(&wcop(&["example24", "--p", "0.4i"])), 2);
    let out = wcop(&["example24", "--p", "0.4", "--N", "64", "--scan", "36"]);
    let v = json(&out);
    assert_eq!(v["report"]["variant"], "WeightedJ");
    // Exit status follows the verdict either way.
    assert_eq!(code(&out), if v["pass"] == true { 0 } else { 1 });
}

#[test]
fn determinism_and_timestamp() {
    let args = ["spectrum", "--thm", "3.4", "--p", "0.5", "--a0", "0.2", "--a1", "0.3", "--N", "32", "--no-timestamp"];
    let (a, b) = (wcop(&args), wcop(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a).get("timestamp").is_none());
    assert!(json(&wcop(&args[..args.len() - 1]))["timestamp"].is_u64());
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"N": 40, "M": 10, "tol": 1e-9}"#).unwrap();
    let target = dir.path().join("out.json");
    let out = wcop(&[
        "cs-check", "--nf", "0.2,0.3", "--conj", "J", "--config", cfg.to_str().unwrap(), "--M", "12", "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!((v["N"].as_u64(), v["M"].as_u64(), v["tol"].as_f64()), (Some(40), Some(12), Some(1e-9)));

    assert_eq!(code(&wcop(&["cs-check", "--nf", "0.2,0.3", "--conj", "J", "--N", "600"])), 2);
    assert_eq!(code(&wcop(&["cs-check", "--nf", "0.2,0.3", "--conj", "J", "--N", "40", "--M", "21"])), 2);
}

#[test]
fn matrix_export() {
    let out = wcop(&["matrix", "--nf", "0.2,0.3", "--N", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 3);
    let v = json(&wcop(&["matrix", "--map", "phi_p:0.5", "--psi", "psi_p:p=0.5", "--N", "4", "--format", "json"]));
    assert_eq!(v["n"], 4);
}

#[test]
fn suite_single_criteria() {
    let out = wcop(&["suite", "--criterion", "4", "--no-timestamp"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["pass"], true);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("PASS"));

    let out = wcop(&["suite", "--criterion", "5"]);
    let v = json(&out);
    if v["pass"] == false {
        assert_ne!(code(&out), 0);
        assert!(String::from_utf8_lossy(&out.stderr).contains("first failing criterion: 5"));
    }
    assert_eq!(code(&wcop(&["suite", "--criterion", "99"])), 2);
}
