//! Empirical modulus of continuity of `L̂₁` along a rank-preserving path.

use serde::{Deserialize, Serialize};

use crate::cocycle::Cocycle;
use crate::error::{Error, Result};
use crate::linalg::{numeric_rank, Matrix, DEFAULT_RANK_TOL};
use crate::lyapunov::{top_exponent_samples, McParams};
use crate::mc::mean_stderr;
use crate::rng::{Purpose, Stream};

/// Points with `φ ≤ NOISE_FACTOR · stderr` are left out of the fit.
pub const NOISE_FACTOR: f64 = 5.0;
pub const ALPHA_MAX: f64 = 1.5;

/// `B_i(δ) = (I + δG_i) A_i (I + δH_i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderPath {
    pub g: Vec<Matrix>,
    pub h: Vec<Matrix>,
}

impl HolderPath {
    /// Gaussian `G_i`, `H_i` scaled to unit spectral norm.
    pub fn random(c: &Cocycle, seed: u64) -> Self {
        let d = c.dim();
        let mut s = Stream::new(seed, Purpose::Perturbation, u64::MAX);
        let mut unit = || {
            let g = Matrix::from_row_major(d, d, (0..d * d).map(|_| s.normal()).collect()).expect("square");
            let n = g.norm2();
            g.scaled(1.0 / n)
        };
        let (mut g, mut h) = (Vec::new(), Vec::new());
        for _ in 0..c.symbols() {
            g.push(unit());
            h.push(unit());
        }
        Self { g, h }
    }

    pub fn max_norm(&self) -> f64 {
        self.g.iter().chain(&self.h).map(Matrix::norm2).fold(0.0, f64::max)
    }

    pub fn at(&self, c: &Cocycle, delta: f64) -> Result<Cocycle> {
        if self.g.len() != c.symbols() || self.h.len() != c.symbols() {
            return Err(Error::Shape("path directions do not match the alphabet".into()));
        }
        let d = c.dim();
        let id = Matrix::identity(d);
        let mats = c
            .matrices()
            .iter()
            .zip(self.g.iter().zip(&self.h))
            .map(|(a, (g, h))| (&id + &g.scaled(delta)).matmul(a).matmul(&(&id + &h.scaled(delta))))
            .collect();
        Cocycle::new(c.probs().to_vec(), mats)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderPoint {
    pub delta: f64,
    pub phi: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderFit {
    pub alpha_hat: f64,
    pub constant: f64,
    pub window: (f64, f64),
    pub r2: f64,
    pub points_used: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    pub k: usize,
    pub points: Vec<HolderPoint>,
    pub fit: Option<HolderFit>,
    pub reason: Option<String>,
}

/// `φ(δ) = |L̂₁(B(δ)) − L̂₁(B(0))|` from paired samples on the same words.
/// Every path point must keep rank `k`.
pub fn holder_points(c: &Cocycle, k: usize, path: &HolderPath, deltas: &[f64], p: &McParams) -> Result<Vec<HolderPoint>> {
    if deltas.is_empty() {
        return Err(Error::Domain("delta grid is empty".into()));
    }
    if let Some(d) = deltas.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
        return Err(Error::Domain(format!("delta {d} must be non-negative")));
    }
    let d_max = deltas.iter().copied().fold(0.0, f64::max);
    if d_max * path.max_norm() >= 1.0 {
        return Err(Error::Domain(format!("delta_max·max|G|,|H| = {} must be below 1", d_max * path.max_norm())));
    }
    let base = top_exponent_samples(c, p)?;
    if base.iter().any(|x| !x.is_finite()) {
        return Err(Error::Precondition("L1 estimate is -inf at delta = 0".into()));
    }
    deltas
        .iter()
        .map(|&delta| {
            let b = path.at(c, delta)?;
            if let Some(r) = b.matrices().iter().map(|m| numeric_rank(m, DEFAULT_RANK_TOL)).find(|&r| r != k) {
                return Err(Error::Precondition(format!("rank {r} != {k} at delta = {delta}")));
            }
            let xs = top_exponent_samples(&b, p)?;
            if xs.iter().any(|x| !x.is_finite()) {
                return Err(Error::Precondition(format!("L1 estimate is -inf at delta = {delta}")));
            }
            let diffs: Vec<f64> = xs.iter().zip(&base).map(|(x, y)| x - y).collect();
            let (m, se) = mean_stderr(&diffs);
            Ok(HolderPoint { delta, phi: m.abs(), stderr: se })
        })
        .collect()
}

/// OLS of `log φ` on `log δ` over points with `δ > 0` and `φ > 5·stderr`.
pub fn fit_holder(points: &[HolderPoint]) -> Result<HolderFit> {
    let used: Vec<&HolderPoint> =
        points.iter().filter(|q| q.delta > 0.0 && q.phi > 0.0 && q.phi > NOISE_FACTOR * q.stderr).collect();
    if used.len() < 2 {
        return Err(Error::Precondition("modulus below resolution".into()));
    }
    let xs: Vec<f64> = used.iter().map(|q| q.delta.ln()).collect();
    let ys: Vec<f64> = used.iter().map(|q| q.phi.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Precondition("modulus below resolution: one distinct delta".into()));
    }
    let alpha = sxy / sxx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - my - alpha * (x - mx)).powi(2)).sum();
    if !(alpha > 0.0 && alpha <= ALPHA_MAX) {
        return Err(Error::Precondition(format!("fitted exponent {alpha:.4} outside (0, {ALPHA_MAX}]")));
    }
    let window = used.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), q| (lo.min(q.delta), hi.max(q.delta)));
    Ok(HolderFit {
        alpha_hat: alpha,
        constant: (my - alpha * mx).exp(),
        window,
        r2: if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 },
        points_used: used.len(),
    })
}

pub fn holder_probe(c: &Cocycle, k: usize, path: &HolderPath, deltas: &[f64], p: &McParams) -> Result<HolderReport> {
    let points = holder_points(c, k, path, deltas, p)?;
    let (fit, reason) = match fit_holder(&points) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(HolderReport { k, points, fit, reason })
}
