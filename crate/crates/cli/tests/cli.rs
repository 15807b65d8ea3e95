use std::process::{Command, Output};

use serde_json::Value;

fn su3sp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su3sp")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn cplx(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn solve_single_magnon_on_two_sites() {
    let out = su3sp(&["solve", "--N", "2", "--a", "1", "--b", "0", "--no-timing"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["command"], "solve");
    assert_eq!(r["runtime_ms"], Value::Null);
    assert_eq!(r["results"]["count"], 1);
    let (re, im) = cplx(&r["results"]["states"][0]["u"][0]);
    // c = i by default, root at −c/2
    assert!(re.abs() < 1e-12 && (im + 0.5).abs() < 1e-12);
    assert!(r["residuals"]["bethe_defect"][0].as_f64().unwrap() < 1e-12);
}

#[test]
fn spectrum_contains_bethe_eigenvalues() {
    let out = su3sp(&["spectrum", "--N", "3", "--sector", "1,1,1", "--w", "0.3"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["results"]["eigenvalues"].as_array().unwrap().len(), 6);
    assert!(!r["results"]["bethe_states"].as_array().unwrap().is_empty());
    for d in r["residuals"]["bethe_relative_distance"].as_array().unwrap() {
        assert!(d.as_f64().unwrap() < 1e-9);
    }
    assert!(r["runtime_ms"].is_u64());
}

#[test]
fn identical_configs_give_identical_bytes() {
    for args in [
        &["sp", "--a", "2", "--b", "1", "--seed", "9", "--no-timing"][..],
        &["sp", "--mode", "float", "--a", "2", "--b", "2", "--seed", "9", "--no-timing"],
        &["verify", "--suite", "lemma2", "--trials", "20", "--seed", "3", "--no-timing"],
        &["ff", "--N", "3", "--a", "1", "--b", "0", "--no-timing"],
    ] {
        let (x, y) = (su3sp(args), su3sp(args));
        assert!(x.status.success(), "{args:?}: {}", String::from_utf8_lossy(&x.stdout));
        assert_eq!(x.stdout, y.stdout, "{args:?}");
    }
}

#[test]
fn float_scalar_product_with_vanishing_partition_terms() {
    // this instance has DWPF terms whose t-matrix is exactly singular
    let out = su3sp(&["sp", "--mode", "float", "--a", "2", "--b", "2", "--seed", "9"]);
    assert!(out.status.success());
    assert!(json(&out)["residuals"]["relative_difference"].as_f64().unwrap() < 1e-9);
}

#[test]
fn verify_suite_passes_and_counts() {
    let out = su3sp(&["verify", "--suite", "lemma3", "--trials", "200", "--seed", "7", "--max-m", "3"]);
    assert!(out.status.success());
    let r = json(&out);
    let s = &r["results"]["suites"][0];
    assert_eq!(s["passed"], 200);
    assert_eq!(s["failed"], 0);
    assert_eq!(r["results"]["all_passed"], true);
}

#[test]
fn oracle_suite_at_fixed_size() {
    let out = su3sp(&["verify", "--suite", "oracle", "--a", "2", "--b", "2", "--trials", "50"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["results"]["suites"][0]["passed"], 50);
}

#[test]
fn failing_suite_exits_one_with_reproduction() {
    // orthogonality is a κ = 1 statement, so any other twist makes every trial fail
    let out = su3sp(&["verify", "--suite", "orthogonality", "--kappa", "2", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let f = &r["results"]["suites"][0]["first_failure"];
    assert_eq!(
        f["reproduce"],
        "su3sp verify --suite orthogonality --mode exact --seed 1 --trials 1 --kappa 2"
    );
    assert!(r["reproduce"].is_string());
}

#[test]
fn non_dominant_form_factor_sector_is_a_structured_error() {
    let out = su3sp(&["ff", "--N", "4", "--a", "1", "--b", "1", "--site", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["error"]["kind"], "no-states");
    assert_eq!(r["results"], Value::Null);
}

#[test]
fn bad_input_is_a_config_error() {
    for args in [
        &["verify", "--trials", "0"][..],
        &["sp", "--a", "9"],
        &["solve", "--N", "2", "--a", "1", "--c", "0"],
        &["solve", "--N", "2", "--a", "1", "--suite", "oracle"],
        &["verify", "--suite", "chain", "--mode", "exact"],
        &["spectrum", "--N", "3", "--sector", "1,2"],
    ] {
        let out = su3sp(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(json(&out)["error"]["kind"], "config", "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("su3sp-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let out = su3sp(&["zcoeff", "--a", "2", "--b", "1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["command"], "zcoeff");
    std::fs::remove_dir_all(&dir).unwrap();
}
