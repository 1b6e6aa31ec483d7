//! End-to-end CLI coverage: the exit-code contract, report schemas, CSV
//! shape and byte-level determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heun-unfold"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn classify_res1_and_res2() {
    let out = run(&[
        "classify",
        "--alpha",
        "4",
        "--beta",
        "0",
        "--gamma",
        "1",
        "--sqrt-eps",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema"], "heun-unfold/1");
    assert_eq!(v["origin"], "regular-resonant");
    assert_eq!(v["resonance"]["case"], "res1");
    assert_eq!(v["singular_points"]["x_l"], -0.1);

    let out = run(&[
        "classify", "--alpha", "0.5", "--beta", "1", "--gamma", "1", "--m", "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["resonance"]["case"], "res2");
    let se = v["sqrt_eps"].as_f64().unwrap();
    assert!((se - 1.0 / 19.5).abs() < 1e-15);
}

#[test]
fn missing_required_flag_exits_2() {
    let out = run(&["classify", "--beta", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validation_error_exits_2() {
    // beta < 0 violates the parameter contract.
    let out = run(&["classify", "--alpha", "2", "--beta", "-1", "--gamma", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // sqrt-eps out of range.
    let out = run(&[
        "unfold",
        "--alpha",
        "2",
        "--beta",
        "0",
        "--gamma",
        "1",
        "--sqrt-eps",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invariants_reports_lambda_and_both_mu_forms() {
    let out = run(&["invariants", "--alpha", "2", "--beta", "0", "--gamma", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["lambda"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-14);
    let m0_tr = &v["m0"][0][1];
    assert!((m0_tr["im"].as_f64().unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-12);

    let out = run(&["invariants", "--alpha", "1", "--beta", "1", "--gamma", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["entire_solution"], false);

    let out = run(&[
        "invariants",
        "--alpha",
        "3",
        "--beta",
        "1",
        "--gamma",
        "0.4",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v.get("mu").is_some() && v.get("mu_natural_form").is_some());
    let mu = v["mu"]["im"].as_f64().unwrap();
    assert!((mu - 0.43889732507137085).abs() < 1e-10);
}

#[test]
fn limits_pass_and_fail_exit_codes() {
    let out = run(&["limits", "sum-limit", "--alpha", "4", "--gamma", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let extr = v["sweep"]["extrapolated"]["re"].as_f64().unwrap();
    assert!((extr - 8.0 / 6.0).abs() < 1e-6);

    // Trivial pass: gamma = 0 keeps both sides at the identity.
    let out = run(&["limits", "monodromy-limit", "--alpha", "2", "--gamma", "0"]);
    assert_eq!(out.status.code(), Some(0));

    // An absurd tolerance forces a verdict failure: exit 4.
    let out = run(&[
        "limits",
        "sum-limit",
        "--alpha",
        "4",
        "--gamma",
        "2",
        "--tol-limit",
        "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn numeric_failure_exits_3() {
    // Formal-series coefficients overflow f64 for small beta and many terms.
    let out = run(&[
        "resum",
        "series",
        "--alpha",
        "0.5",
        "--beta",
        "0.1",
        "--gamma",
        "0.3",
        "--n-terms",
        "400",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn resum_jump_agrees_with_series() {
    let out = run(&[
        "resum", "jump", "--alpha", "0", "--beta", "1", "--gamma", "0.4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["rel_err"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn oracle_residue_res1() {
    let out = run(&[
        "oracle",
        "residue",
        "--alpha",
        "4",
        "--beta",
        "0",
        "--gamma",
        "0.7+0.3i",
        "--sqrt-eps",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["worst_rel_err"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn appendix_csv_rows() {
    let out = run(&["appendix", "--output", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "alpha,eps,re,im,abs_err");
    // One row per (alpha, eps): 3 alphas x 5 eps values.
    assert_eq!(lines.count(), 15);
}

#[test]
fn json_output_is_deterministic() {
    let args = [
        "limits",
        "sum-limit",
        "--alpha",
        "4",
        "--gamma",
        "1.5",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "identical runs must be byte-identical");
}

#[test]
fn out_file_writing() {
    let dir = std::env::temp_dir().join(format!("heun-unfold-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&[
        "classify",
        "--alpha",
        "4",
        "--beta",
        "0",
        "--gamma",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], "heun-unfold/1");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn complex_flag_parsing_forms() {
    for (arg, expect_re, expect_im) in [
        ("1.5", 1.5, 0.0),
        ("0.7+0.2i", 0.7, 0.2),
        ("-0.3-0.4i", -0.3, -0.4),
        ("2i", 0.0, 2.0),
    ] {
        let out = run(&["invariants", "--alpha", "1", "--beta", "1", "--gamma", arg]);
        assert_eq!(out.status.code(), Some(0), "gamma = {arg}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["gamma"]["re"].as_f64().unwrap(), expect_re);
        assert_eq!(v["gamma"]["im"].as_f64().unwrap(), expect_im);
    }
    let out = run(&[
        "invariants",
        "--alpha",
        "1",
        "--beta",
        "1",
        "--gamma",
        "nonsense",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
