//! Closed-form reference values.
//!
//! The projection/rotation family `((½, ½), (P, R_α))` with `P = diag(1, 0)`
//! stationary measure `Σ_j 2^{-(j+1)} δ_{R_α^j e₁}`. The series
//! `S(α) = Σ_{j≥0} 2^{-(j+1)} log|cos jα|` is the exponent of the cocycle
//! induced on returns to `[P]`; a return takes 2 steps on average, so the top
//! exponent per step is `S(α)/2`. Rank-one families `A_i = u_i v_iᵗ` have
//! top exponent `Σ_{i,j} p_i p_j log|v_iᵗ u_j|`. Single-matrix cocycles have
//! the logs of the eigenvalue moduli as spectrum.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cocycle::Cocycle;
use crate::error::{Error, Result};
use crate::linalg::{dot, eigenvalues, numeric_rank, svd, Matrix};
use crate::lyapunov::{top_exponent_mc, McParams};

/// An angle in radians, or an exact rational multiple of π.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Angle {
    Radians(f64),
    /// `π · num / den`, stored in lowest terms with `den > 0`.
    RationalPi { num: i64, den: i64 },
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Angle {
    pub fn rational_pi(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Input("zero denominator in rational angle".into()));
        }
        let g = gcd(num, den).max(1);
        let s = den.signum();
        Ok(Angle::RationalPi { num: s * num / g, den: s * den / g })
    }

    pub fn radians(&self) -> f64 {
        match *self {
            Angle::Radians(a) => a,
            Angle::RationalPi { num, den } => std::f64::consts::PI * num as f64 / den as f64,
        }
    }

    /// `(cos jα, sin jα)`. For rational angles the multiple is reduced mod 2π
    /// exactly and quarter turns give exact `0, ±1`.
    pub fn cos_sin_multiple(&self, j: i64) -> (f64, f64) {
        match *self {
            Angle::Radians(a) => {
                let t = j as f64 * a;
                (t.cos(), t.sin())
            }
            Angle::RationalPi { num, den } => {
                // jα = π r / den with r reduced into [0, 2 den)
                let r = (j as i128 * num as i128).rem_euclid(2 * den as i128) as i64;
                if (2 * r) % den == 0 {
                    match 2 * r / den {
                        0 => (1.0, 0.0),
                        1 => (0.0, 1.0),
                        2 => (-1.0, 0.0),
                        _ => (0.0, -1.0),
                    }
                } else {
                    let t = std::f64::consts::PI * r as f64 / den as f64;
                    (t.cos(), t.sin())
                }
            }
        }
    }

    /// Smallest `j ≥ 1` with `jα ≡ π/2 (mod π)`, decidable for rational
    /// angles only: with `α = πp/q` in lowest terms a solution exists iff `q`
    /// is even, and then the first one is `j = q/2`.
    pub fn vanishing_index(&self) -> Option<u64> {
        match *self {
            Angle::Radians(_) => None,
            Angle::RationalPi { num, den } => {
                (num != 0 && den % 2 == 0).then_some((den / 2) as u64)
            }
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Radians(a) => write!(f, "{a}"),
            Angle::RationalPi { num, den } => write!(f, "pi*{num}/{den}"),
        }
    }
}

/// Parses `p/q` (or a bare integer `p`) as `πp/q`.
impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("expected p/q with integers p, q; got {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        Angle::rational_pi(p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?)
    }
}

pub fn projection() -> Matrix {
    Matrix::from_diag(&[1.0, 0.0])
}

pub fn rotation_matrix(alpha: Angle) -> Matrix {
    let (c, s) = alpha.cos_sin_multiple(1);
    Matrix::from_rows(&[vec![c, -s], vec![s, c]]).expect("finite rotation")
}

/// `((½, ½), (P, R_α))`.
pub fn rotation_cocycle(alpha: Angle) -> Cocycle {
    Cocycle::new(vec![0.5, 0.5], vec![projection(), rotation_matrix(alpha)])
        .expect("well-formed rotation cocycle")
}

/// Smallest `|cos jα|` in the last-terms window that flags an unreliable tail.
pub const TAIL_COS_THRESHOLD: f64 = 1e-3;
/// Width of the last-terms window.
pub const TAIL_WINDOW: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationOracle {
    pub alpha: f64,
    pub angle: Angle,
    pub j_max: usize,
    #[serde(with = "crate::extreal")]
    pub partial_sum: f64,
    /// `partial_sum / 2`, the exponent per step.
    #[serde(with = "crate::extreal")]
    pub per_step: f64,
    /// Some `j ≤ J` has `cos jα = 0` exactly.
    pub neg_inf: bool,
    pub first_vanishing: Option<u64>,
    /// Some `|cos jα| < 1e-3` with `j` in `[J-10, J]`.
    pub tail_unreliable: bool,
    /// `(2^{-(j+1)}, R_α^j e₁)` for `j = 0..=J`, as projective unit vectors.
    pub atoms: Vec<(f64, [f64; 2])>,
}

/// Partial sum `Σ_{j=0}^{J} 2^{-(j+1)} log|cos jα|` and the truncated atoms.
pub fn rotation_series_l1(alpha: Angle, j_max: usize) -> Result<RotationOracle> {
    if j_max == 0 {
        return Err(Error::Domain("truncation order J must be at least 1".into()));
    }
    let mut sum = 0.0;
    let mut neg_inf = false;
    let mut tail_unreliable = false;
    for j in 0..=j_max {
        let c = alpha.cos_sin_multiple(j as i64).0.abs();
        if c == 0.0 {
            neg_inf = true;
        } else {
            sum += c.ln() * 0.5f64.powi(j as i32 + 1);
        }
        if j + TAIL_WINDOW >= j_max && c < TAIL_COS_THRESHOLD {
            tail_unreliable = true;
        }
    }
    let atoms = orbit_atoms(alpha, j_max);
    Ok(RotationOracle {
        alpha: alpha.radians(),
        angle: alpha,
        j_max,
        partial_sum: if neg_inf { f64::NEG_INFINITY } else { sum },
        per_step: if neg_inf { f64::NEG_INFINITY } else { 0.5 * sum },
        neg_inf,
        first_vanishing: alpha.vanishing_index(),
        tail_unreliable,
        atoms,
    })
}

/// Unit vector with first nonzero coordinate positive.
fn projective(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    let s = if v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0) { -1.0 } else { 1.0 };
    [s * v[0] / n, s * v[1] / n]
}

fn orbit_atoms(alpha: Angle, j_max: usize) -> Vec<(f64, [f64; 2])> {
    let r = rotation_matrix(alpha);
    let mut x = [1.0, 0.0];
    let mut out = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        out.push((0.5f64.powi(j as i32 + 1), x));
        let y = r.matvec(&x);
        x = projective([y[0], y[1]]);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationaryCheck {
    pub j_max: usize,
    /// Total variation `Σ |ν_J − ½(P_*ν_J + R_*ν_J)|` over atoms.
    pub residual: f64,
    /// `2^{-(J+1)}`, the mass lost by truncation.
    pub bound: f64,
}

const SAME_POINT: f64 = 1e-12;

fn same_point(x: &[f64; 2], y: &[f64; 2]) -> bool {
    (x[0] - y[0]).abs() <= SAME_POINT && (x[1] - y[1]).abs() <= SAME_POINT
}

fn add_mass(measure: &mut Vec<([f64; 2], f64)>, x: [f64; 2], w: f64) {
    match measure.iter_mut().find(|(y, _)| same_point(y, &x)) {
        Some((_, m)) => *m += w,
        None => measure.push((x, w)),
    }
}

fn mass_at(measure: &[([f64; 2], f64)], x: &[f64; 2]) -> f64 {
    measure.iter().find(|(y, _)| same_point(y, x)).map_or(0.0, |(_, m)| *m)
}

/// Invariance residual of the truncated measure `ν_J` under
/// `½(P_* + (R_α)_*)`. Fails when an atom lies in the kernel of `P`.
pub fn rotation_stationary_check(alpha: Angle, j_max: usize) -> Result<StationaryCheck> {
    if j_max == 0 {
        return Err(Error::Domain("truncation order J must be at least 1".into()));
    }
    if let Some(j) = alpha.vanishing_index().filter(|&j| j as usize <= j_max) {
        return Err(Error::Precondition(format!(
            "atom R^{j} e1 lies in the kernel of P; the push-forward is undefined"
        )));
    }
    let atoms = orbit_atoms(alpha, j_max);
    let p = projection();
    let r = rotation_matrix(alpha);
    let mut nu = Vec::new();
    for &(w, x) in &atoms {
        add_mass(&mut nu, x, w);
    }
    let mut pushed = Vec::new();
    for &(w, x) in &atoms {
        let px = p.matvec(&x);
        if px.iter().all(|t| *t == 0.0) {
            return Err(Error::Precondition(
                "an atom lies in the kernel of P; the push-forward is undefined".into(),
            ));
        }
        add_mass(&mut pushed, projective([px[0], px[1]]), 0.5 * w);
        let rx = r.matvec(&x);
        add_mass(&mut pushed, projective([rx[0], rx[1]]), 0.5 * w);
    }
    let mut residual: f64 = pushed.iter().map(|(x, w)| (w - mass_at(&nu, x)).abs()).sum();
    residual += nu.iter().filter(|(y, _)| mass_at(&pushed, y) == 0.0).map(|(_, m)| m).sum::<f64>();
    Ok(StationaryCheck { j_max, residual, bound: 0.5f64.powi(j_max as i32 + 1) })
}

/// Rank-one factors `A = u vᵗ` with `|v| = 1`, from the leading singular pair.
pub fn rank_one_factors(a: &Matrix, tol: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let r = numeric_rank(a, tol);
    if r != 1 {
        return Err(Error::Precondition(format!("matrix has numeric rank {r}, expected 1")));
    }
    let dec = svd(a);
    let u: Vec<f64> = dec.u.column(0).iter().map(|x| x * dec.s[0]).collect();
    Ok((u, dec.v.column(0)))
}

/// `Σ_{i,j} p_i p_j log|v_iᵗ u_j|`; `-∞` when some weighted pairing vanishes
/// (`|v_iᵗ u_j| ≤ tol · |u_j|`).
pub fn rank_one_exact_l1(c: &Cocycle, tol: f64) -> Result<f64> {
    let factors =
        c.matrices().iter().map(|a| rank_one_factors(a, tol)).collect::<Result<Vec<_>>>()?;
    let p = c.probs();
    let mut total = 0.0;
    for (i, (_, vi)) in factors.iter().enumerate() {
        for (j, (uj, _)) in factors.iter().enumerate() {
            let w = p[i] * p[j];
            if w == 0.0 {
                continue;
            }
            let x = dot(vi, uj).abs();
            if x <= tol * crate::linalg::norm(uj) {
                return Ok(f64::NEG_INFINITY);
            }
            total += w * x.ln();
        }
    }
    Ok(total)
}

/// Logs of eigenvalue moduli, descending; moduli at most `1e-14‖A‖` are `-∞`.
pub fn single_matrix_spectrum(a: &Matrix) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::Shape(format!("{}x{} matrix is not square", a.rows(), a.cols())));
    }
    let floor = 1e-14 * a.norm2();
    let mut out: Vec<f64> = eigenvalues(a)
        .iter()
        .map(|(re, im)| {
            let m = re.hypot(*im);
            if m <= floor {
                f64::NEG_INFINITY
            } else {
                m.ln()
            }
        })
        .collect();
    out.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub alpha: f64,
    #[serde(with = "crate::extreal")]
    pub series: f64,
    #[serde(with = "crate::extreal")]
    pub per_step: f64,
    pub neg_inf: bool,
    pub tail_unreliable: bool,
    /// Smallest `|cos jα|` over `1 ≤ j ≤ J`.
    pub min_abs_cos: f64,
    #[serde(with = "crate::extreal")]
    pub mc: f64,
    pub mc_stderr: f64,
    pub zero_product_fraction: f64,
}

/// Series value and Monte Carlo estimate for each angle of the grid.
pub fn rotation_alpha_scan(grid: &[Angle], j_max: usize, p: &McParams) -> Result<Vec<ScanRow>> {
    grid.iter()
        .map(|&alpha| {
            let oracle = rotation_series_l1(alpha, j_max)?;
            let est = top_exponent_mc(&rotation_cocycle(alpha), p)?;
            let min_abs_cos = (1..=j_max)
                .map(|j| alpha.cos_sin_multiple(j as i64).0.abs())
                .fold(f64::INFINITY, f64::min);
            Ok(ScanRow {
                alpha: alpha.radians(),
                series: oracle.partial_sum,
                per_step: oracle.per_step,
                neg_inf: oracle.neg_inf,
                tail_unreliable: oracle.tail_unreliable,
                min_abs_cos,
                mc: est.values[0],
                mc_stderr: est.stderr[0],
                zero_product_fraction: est.zero_product_fraction,
            })
        })
        .collect()
}
