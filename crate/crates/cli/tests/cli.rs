use std::process::{Command, Output};

use jacobi_fbl::bounds::error_probability_bounds;
use jacobi_fbl::spectral::capacity_approx;
use jacobi_fbl::{make_dims, noise_power_from_db};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacobi-fbl")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn capacity_json_matches_library() {
    let v = json(&run(&["capacity", "--N", "4", "--M", "6", "--n", "16", "--snr-db", "5", "--json"]));
    let want = capacity_approx(&make_dims(4, 6, 16, 1).unwrap(), noise_power_from_db(5.0)).unwrap();
    assert_eq!(v["cbar"].as_f64(), Some(want.cbar));
    assert_eq!(v["delta"].as_f64(), Some(want.delta));
}

#[test]
fn capacity_text_round_trips() {
    let out = run(&["capacity", "--N", "6", "--M", "4", "--n", "16", "--snr-db", "-3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.starts_with("cbar")).unwrap();
    let got: f64 = line.split_whitespace().last().unwrap().parse().unwrap();
    let want = capacity_approx(&make_dims(6, 4, 16, 1).unwrap(), noise_power_from_db(-3.0)).unwrap().cbar;
    assert_eq!(got, want);
}

#[test]
fn rate_at_capacity_gives_half() {
    let d = make_dims(4, 6, 16, 60).unwrap();
    let cbar = capacity_approx(&d, noise_power_from_db(5.0)).unwrap().cbar;
    let rate = format!("{cbar:.17e}");
    let v = json(&run(&["bounds", "--N", "4", "--M", "6", "--n", "16", "--L", "60", "--snr-db", "5", "--rate", &rate, "--json"]));
    assert!((v["lower"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!((v["upper"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    let b = error_probability_bounds(&d, noise_power_from_db(5.0), cbar).unwrap();
    assert_eq!(v["xi_plus"].as_f64(), Some(b.xi_plus));
}

#[test]
fn positive_r_is_flagged() {
    let out = run(&["bounds", "--N", "4", "--M", "6", "--n", "16", "--L", "60", "--snr-db", "5", "--rate", "0.9"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("r>0"));
}

#[test]
fn exit_codes() {
    let bad_dims = run(&["capacity", "--N", "5", "--M", "5", "--n", "9", "--snr-db", "5"]);
    assert_eq!(bad_dims.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_dims.stderr).contains("N+M exceeds n"));
    assert_eq!(run(&["validate", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--out", "x.csv"]).status.code(), Some(2));
    assert_eq!(run(&["validate", "--suite", "rayleigh"]).status.code(), Some(0));
}

#[test]
fn bad_config_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[dims]\nN = 4\nM = 6\nn = [16]\nL = [60]\n[snr]\ndb = [5.0]\n[rate]\nvalue = 0.3\n[outputs]\nquantities = [\"cbarr\"]\n").unwrap();
    let out = run(&["sweep", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o.csv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 11") && err.contains("cbarr"), "{err}");
}

#[test]
fn fig3_json_carries_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig3.json");
    let out = run(&["sweep", "--preset", "fig3", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["provenance"]["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3 * 11 * 8);
}
