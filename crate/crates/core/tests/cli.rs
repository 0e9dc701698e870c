use std::path::{Path, PathBuf};

use cocyclab::cli::{run, EXIT_INPUT, EXIT_PRECONDITION};
use cocyclab::io::{parse_tail_csv, read_reduced};
use cocyclab::linalg::DEFAULT_RANK_TOL;
use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn exec(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("cocyclab").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json_ok(args: &[&str]) -> Value {
    let (code, out, err) = exec(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn rotation_at_right_angle_is_neg_inf() {
    let v = json_ok(&["rotation", "--alpha-pi", "1/2", "--series", "-n", "100", "--samples", "10"]);
    assert_eq!(v["result"]["neg_inf"], Value::Bool(true));
    assert_eq!(v["config"]["alpha_pi"], "1/2");
}

#[test]
fn lyapunov_of_rotations_is_zero() {
    let v = json_ok(&["lyapunov", &data("rotations.json"), "-n", "200", "--samples", "20"]);
    let l1 = v["result"]["values"][0].as_f64().unwrap();
    assert!(l1.abs() < 1e-12, "{l1}");
    assert_eq!(v["config"]["seed"], 0);
    assert_eq!(v["config"]["command"], "lyapunov");
}

#[test]
fn reduce_then_check_reduction() {
    let dir = tempfile::tempdir().unwrap();
    let reduced: PathBuf = dir.path().join("reduced.json");
    let (code, _, err) = exec(&["reduce", &data("rank1.json"), "-k", "1", "-o", reduced.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let r = read_reduced(&reduced, DEFAULT_RANK_TOL).unwrap();
    assert_eq!((r.k, r.symbols(), r.dim()), (1, 2, 3));
    let v = json_ok(&["check-reduction", &data("rank1.json"), reduced.to_str().unwrap(), "--words", "20"]);
    assert!(v["result"]["max_residual"].as_f64().unwrap() < 1e-10);
    assert!(v["result"]["intertwining_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn rank_one_oracle_agrees() {
    let v = json_ok(&["rank1-oracle", &data("rank1.json"), "-n", "400", "--samples", "100"]);
    let text = v["result"].to_string();
    assert!(text.contains("exact"), "{text}");
}

#[test]
fn csv_tail_round_trips() {
    let (code, out, err) = exec(&[
        "ldt",
        &data("rank1.json"),
        "--format",
        "csv",
        "--samples",
        "50",
        "--n-grid",
        "10,20",
        "--eps-grid",
        "0.1,0.2",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("# {"));
    let t = parse_tail_csv(&out).unwrap();
    assert_eq!(t.rows.len(), 4);
    assert!(t.l_ref.is_finite());
    assert!(t.rows.iter().all(|r| (0.0..=1.0).contains(&r.p_hat) && r.samples == 50));
}

#[test]
fn output_is_reproducible() {
    let args = ["spectrum", &data("rank1.json"), "-i", "1", "-n", "300", "--samples", "30", "--seed", "7"];
    let (_, a, _) = exec(&args);
    let (_, b, _) = exec(&args);
    assert_eq!(a, b);
    let mut other = args.to_vec();
    *other.last_mut().unwrap() = "8";
    assert_ne!(exec(&other).1, a);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim": 2, "symbols": 1, "probs": [1.0], "matrices": [[[1, 0], [0]]]}"#).unwrap();
    let (code, _, err) = exec(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("matrices[0][1]"), "{err}");
    assert_eq!(exec(&["validate", "/nonexistent/cocycle.json"]).0, EXIT_INPUT);
    assert_eq!(exec(&["no-such-command"]).0, EXIT_INPUT);
    let (code, _, err) = exec(&["reduce", &data("orthogonal_rank1.json"), "-k", "1"]);
    assert_eq!(code, EXIT_PRECONDITION, "{err}");
    assert_eq!(exec(&["rank1-oracle", &data("rotations.json"), "-n", "50", "--samples", "5"]).0, EXIT_PRECONDITION);
}

#[test]
fn theta_detects_orthogonal_family() {
    let v = json_ok(&["theta", &data("orthogonal_rank1.json"), "-k", "1"]);
    assert_eq!(v["result"]["positive"], Value::Bool(false));
    let v = json_ok(&["theta", &data("rank1.json"), "-k", "1"]);
    assert_eq!(v["result"]["positive"], Value::Bool(true));
}
