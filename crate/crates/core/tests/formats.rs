mod common;

use cocyclab::io::{cocycle_to_json, parse_cocycle, parse_reduced, reduced_to_json};
use cocyclab::linalg::DEFAULT_RANK_TOL;
use cocyclab::lyapunov::{top_exponent_mc, LyapunovEstimate, McParams};
use cocyclab::oracles::{rotation_series_l1, Angle, RotationOracle};
use cocyclab::reduction::reduce;
use common::*;

#[test]
fn cocycle_json_is_bit_exact() {
    let mut s = stream(300, 0);
    let c = constant_rank(4, 2, 3, &mut s);
    let back = parse_cocycle(&cocycle_to_json(&c)).unwrap();
    assert_eq!(back, c);
}

#[test]
fn reduced_json_is_bit_exact() {
    let mut s = stream(301, 0);
    let c = constant_rank(4, 2, 3, &mut s);
    let r = reduce(&c, 2, DEFAULT_RANK_TOL).unwrap();
    assert_eq!(parse_reduced(&reduced_to_json(&r), DEFAULT_RANK_TOL).unwrap(), r);
}

#[test]
fn reduced_json_is_checked() {
    let mut s = stream(302, 0);
    let c = constant_rank(3, 1, 2, &mut s);
    let mut r = reduce(&c, 1, DEFAULT_RANK_TOL).unwrap();
    let x = r.bases[0].get(0, 0);
    r.bases[0].set(0, 0, x + 0.5);
    assert!(parse_reduced(&reduced_to_json(&r), DEFAULT_RANK_TOL).is_err());
}

#[test]
fn neg_inf_survives_json() {
    let est = top_exponent_mc(&orthogonal_rank_one(2), &McParams::new(20, 4, 0)).unwrap();
    let text = serde_json::to_string(&est).unwrap();
    assert!(text.contains("\"-inf\""), "{text}");
    let back: LyapunovEstimate = serde_json::from_str(&text).unwrap();
    assert_eq!(back, est);

    let o = rotation_series_l1(Angle::rational_pi(1, 2).unwrap(), 16).unwrap();
    let back: RotationOracle = serde_json::from_str(&serde_json::to_string(&o).unwrap()).unwrap();
    assert_eq!(back.partial_sum, f64::NEG_INFINITY);
    assert!(back.neg_inf);
}
