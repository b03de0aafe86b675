//! End-to-end tests of the binary: exit codes, JSON shape, config echo, and
//! byte determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_kostant-toda")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary failed to spawn")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is not valid JSON")
}

#[test]
fn rootsys_info_a2() {
    let out = run(&["rootsys-info", "A2"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["payload"]["h"], 2);
    assert_eq!(v["payload"]["psi"], serde_json::json!([1, 1]));
    assert_eq!(v["payload"]["dim_g"], 8);
    // config echo carries the resolved invocation
    assert_eq!(v["config"]["subcommand"], "rootsys-info");
    assert_eq!(v["config"]["seed"], 0);
}

#[test]
fn chevalley_verify_exit_zero() {
    let out = run(&["chevalley-verify", "B2"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["payload"]["passed"], true);
}

#[test]
fn split_verify_seeded_ok() {
    let out = run(&["split-verify", "G2", "--samples", "20", "--seed", "7"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["payload"]["oracle_disagreements"], 0);
}

#[test]
fn split_region_membership() {
    let out = run(&["split-region", "A2", "--ord", "0", "--beta", "-1,-1"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["payload"]["admissible"], true);
    let out = run(&["split-region", "A1", "--ord", "0", "--beta", "1"]);
    let v = stdout_json(&out);
    assert_eq!(v["payload"]["admissible"], false);
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(run(&["rootsys-info", "Q3"]).status.code(), Some(2));
    assert_eq!(run(&["rootsys-info", "B1"]).status.code(), Some(2));
    assert_eq!(
        run(&["sl2", "A2", "--subset", "alpha_1,alpha_2,-psi"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["toda-solve", "/definitely/missing.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn sl2_subset_report() {
    let out = run(&["sl2", "A2", "--subset", "alpha_1,-psi"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let triple = &v["payload"]["triples"][0];
    assert_eq!(triple["beta_sq"], serde_json::json!(["12", "12"]));
    assert_eq!(triple["cert"]["passed"], true);
}

#[test]
fn determinism_byte_identical() {
    for args in [
        vec!["split-verify", "C3", "--samples", "8", "--seed", "123"],
        vec!["decay-study", "A1", "--b", "1,1", "--delta", "0.3", "--t-list", "1,2", "--nodes", "13"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "stdout differs for {:?}", args);
    }
}

#[test]
fn toda_solve_writes_csv() {
    let dir = std::env::temp_dir().join("ktoda_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let prob = dir.join("p.json");
    std::fs::write(
        &prob,
        r#"{
            "algebra": {"family": "A", "rank": 1},
            "domain": {"kind": "rectangle", "x0": -1.0, "x1": 1.0, "y0": -1.0, "y1": 1.0, "nx": 12, "ny": 12},
            "higgs": [
                {"root": "alpha_1", "terms": [{"k": 0, "re": 1.0, "im": 0.0}]},
                {"root": "-psi", "terms": [{"k": 0, "re": 1.0, "im": 0.0}]}
            ],
            "boundary": {"kind": "canonical_plus", "values": [0.2]},
            "scale_t": 1.0
        }"#,
    )
    .unwrap();
    let csv = dir.join("sol.csv");
    let out = run(&[
        "toda-solve",
        prob.to_str().unwrap(),
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["payload"]["converged"], true);
    let resid = v["payload"]["final_residual"]
        .as_f64()
        .expect("residual is a number");
    assert!(resid <= 1e-10);
    // config echoes the parsed problem
    assert_eq!(v["config"]["problem"]["algebra"]["rank"], 1);
    let content = std::fs::read_to_string(Path::new(&csv)).unwrap();
    let mut lines = content.lines();
    assert_eq!(lines.next().unwrap(), "x,y,xi_1");
    assert_eq!(content.lines().count(), 1 + 144);
    // 17 significant digits with '.' decimal separator
    assert!(content.lines().nth(1).unwrap().contains("e"));
}

#[test]
fn radial_and_2d_agree_through_cli() {
    let dir = std::env::temp_dir().join("ktoda_cli_radial");
    std::fs::create_dir_all(&dir).unwrap();
    let prob = dir.join("ann.json");
    std::fs::write(
        &prob,
        r#"{
            "algebra": {"family": "A", "rank": 1},
            "domain": {"kind": "annulus", "r_min": 0.2, "r_max": 0.8, "ns": 17, "ntheta": 8},
            "higgs": [
                {"root": "alpha_1", "terms": [{"k": -1, "re": 1.0, "im": 0.0}]},
                {"root": "-psi", "terms": [{"k": 1, "re": 1.0, "im": 0.0}]}
            ],
            "boundary": {"kind": "constant", "values": [0.0]},
            "scale_t": 1.0
        }"#,
    )
    .unwrap();
    let out2d = run(&["toda-solve", prob.to_str().unwrap()]);
    let out1d = run(&["toda-radial", prob.to_str().unwrap()]);
    assert!(out2d.status.success() && out1d.status.success());
    let v2 = stdout_json(&out2d);
    let v1 = stdout_json(&out1d);
    assert_eq!(v2["payload"]["converged"], true);
    assert_eq!(v1["payload"]["converged"], true);
    assert_eq!(v1["payload"]["grid"]["n2"], 1);
}

#[test]
fn model_verify_and_slope_fit() {
    let out = run(&[
        "model-verify",
        "A1",
        "--beta",
        "0",
        "--subset",
        "alpha_1",
        "--grids",
        "24x24,48x48",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["payload"]["passed"], true);

    let out = run(&[
        "slope-fit",
        "A2",
        "--beta=-1,-1",
        "--subset",
        "alpha_1,alpha_2",
        "--ord=-1",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["payload"]["region"]["admissible"], true);
    let err = v["payload"]["max_coordinate_error"].as_f64().unwrap();
    assert!(err <= 0.05);
}
