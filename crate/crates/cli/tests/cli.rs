//! End-to-end runs of the `sharptrace` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sharptrace"))
        .args(args)
        .env_remove("SHARPTRACE_PROFILE")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn constants_at_three_one() {
    let o = run(&["constants", "--d", "3", "--s", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("lambda_0"), "{text}");
}

#[test]
fn domain_errors_exit_two_and_name_the_interval() {
    for s in ["0.5", "1.5", "-1"] {
        let o = run(&["constants", "--d", "3", "--s", s]);
        assert_eq!(o.status.code(), Some(2), "s = {s}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains("(1/2, d/2)"), "{err}");
    }
    assert_eq!(run(&["verify", "--suite", "nope", "--d", "3", "--s", "1"]).status.code(), Some(2));
    assert_eq!(run(&["constants", "--d", "3", "--s", "1", "--profile", "huge"]).status.code(), Some(2));
}

#[test]
fn failed_verification_exits_one() {
    // a 4-point rule cannot reproduce the Funk–Hecke eigenvalues
    let o = run(&["verify", "--suite", "operator", "--d", "3", "--s", "0.75", "--order", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn verify_json_is_deterministic_and_complete() {
    let args = ["verify", "--suite", "all", "--d", "3", "--s", "0.75", "--json"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["version"], "1");
    assert_eq!(v["config"]["profile"], "fast");
    let reports = v["reports"].as_array().unwrap();
    assert!(reports.len() > 30);
    for r in reports {
        for key in [
            "check_id", "anchor", "provenance", "claimed", "computed", "abs_error", "rel_error",
            "tolerance", "pass", "config",
        ] {
            assert!(r.get(key).is_some(), "{key} missing in {r}");
        }
        assert!(r.get("runtime_ms").is_none());
        assert!(["PAPER", "DERIVED", "TRIVIAL"].contains(&r["provenance"].as_str().unwrap()));
    }
}

#[test]
fn timings_are_opt_in() {
    let o = run(&["verify", "--suite", "constants", "--d", "3", "--s", "1", "--json", "--timings"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["reports"].as_array().unwrap().iter().all(|r| r["runtime_ms"].is_u64()));
}

#[test]
fn profile_env_overrides_the_flag() {
    let o = Command::new(env!("CARGO_BIN_EXE_sharptrace"))
        .args(["verify", "--suite", "constants", "--d", "3", "--s", "1", "--json", "--profile", "fast"])
        .env("SHARPTRACE_PROFILE", "full")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["profile"], "full");
    assert_eq!(v["config"]["order"], 400);
}

#[test]
fn out_file_holds_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&["verify", "--suite", "trace", "--d", "3", "--s", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["reports"].as_array().unwrap().iter().all(|r| r["pass"] == true));
}

#[test]
fn eigen_table_at_three_one_is_odd_reciprocals() {
    let o = run(&["eigen", "--d", "3", "--s", "1", "--kmax", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,lambda,lambda_numeric,rel_gap"));
    for (k, line) in lines.enumerate() {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols[0] as usize, k);
        let want = 1.0 / (2 * k + 1) as f64;
        assert!((cols[1] - want).abs() < 1e-12 && (cols[2] - want).abs() < 1e-10, "{line}");
    }
}

#[test]
fn fang_wang_identity_in_four_dimensions() {
    let o = run(&["eigen", "--d", "4", "--s", "1", "--theta", "fang-wang", "--kmax", "200", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    for row in v["rows"].as_array().unwrap() {
        assert!((row["lambda"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    }
}

#[test]
fn user_theta_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("theta.csv");
    std::fs::write(&path, "0,1\n1000,1\n").unwrap();
    let theta = format!("user:{}", path.display());
    let o = run(&["eigen", "--d", "3", "--s", "1", "--theta", &theta, "--kmax", "10", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert!((rows[3]["lambda"].as_f64().unwrap() - 1.0 / 7.0).abs() < 1e-12);
}

#[test]
fn profile_columns_and_range_errors() {
    let o = run(&["profile", "--d", "3", "--s", "1", "--npts", "7", "--rmin", "0.5", "--rmax", "3.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,u,u_closed_form,rho,fourier"));
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let (r, u, c): (f64, f64, f64) = (cols[0].parse().unwrap(), cols[1].parse().unwrap(), cols[2].parse().unwrap());
        let want = 4.0 * std::f64::consts::PI * f64::min(1.0, 1.0 / r);
        assert!((u - want).abs() < 1e-9 * want && (c - want).abs() < 1e-12 * want, "{line}");
    }
    assert_eq!(run(&["profile", "--d", "3", "--s", "1", "--rmin", "2", "--rmax", "1"]).status.code(), Some(2));
    assert_eq!(run(&["profile", "--d", "3", "--s", "1", "--npts", "0"]).status.code(), Some(2));
}
