//! Empirical deviation tails `P̂_n(ε)` and the fit `P ≈ C·e^{−ncε²}`.

use serde::{Deserialize, Serialize};

use crate::cocycle::{theta_positive, Cocycle, ScaledMatrix, SymbolSampler};
use crate::error::{Error, Result};
use crate::linalg::{numeric_rank, Matrix, DEFAULT_RANK_TOL};
use crate::lyapunov::{top_exponent_mc, McParams};
use crate::mc::par_samples;
use crate::rng::{Purpose, Stream};

/// Fit window on `p̂`.
pub const FIT_P_MIN: f64 = 1e-4;
pub const FIT_P_MAX: f64 = 0.5;
pub const MIN_FIT_ROWS: usize = 6;
pub const MIN_R2: f64 = 0.8;
/// Neighbour redraws allowed per trial.
pub const MAX_REDRAWS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub n: usize,
    pub epsilon: f64,
    pub p_hat: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl TailRow {
    pub fn new(n: usize, epsilon: f64, p_hat: f64, samples: usize) -> Self {
        let stderr = (p_hat * (1.0 - p_hat) / samples as f64).sqrt();
        Self { n, epsilon, p_hat, stderr, samples }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailCurve {
    pub l_ref: f64,
    pub rows: Vec<TailRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailParams {
    pub n_grid: Vec<usize>,
    pub eps_grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
}

impl TailParams {
    fn check(&self) -> Result<()> {
        if self.n_grid.is_empty() || self.eps_grid.is_empty() {
            return Err(Error::Domain("tail grids must be nonempty".into()));
        }
        if self.n_grid.contains(&0) {
            return Err(Error::Domain("word lengths must be at least 1".into()));
        }
        if let Some(e) = self.eps_grid.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return Err(Error::Domain(format!("epsilon {e} must be positive")));
        }
        if self.samples == 0 {
            return Err(Error::Domain("samples must be at least 1".into()));
        }
        Ok(())
    }

    fn n_max(&self) -> usize {
        self.n_grid.iter().copied().max().unwrap_or(1)
    }
}

/// `n⁻¹ log ‖Aⁿ‖` at every grid length, read off the prefixes of one word of
/// length `max(n_grid)` per sample.
pub fn prefix_exponents(c: &Cocycle, n_grid: &[usize], samples: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let sampler = SymbolSampler::new(c.probs())?;
    let n_max = n_grid.iter().copied().max().unwrap_or(0);
    Ok(par_samples(samples, |i| {
        let w = sampler.word(n_max, seed, i);
        let mut acc = ScaledMatrix::identity(c.dim());
        let mut at = vec![0.0; n_max + 1];
        for (t, &s) in w.symbols().iter().enumerate() {
            acc.push_left(c.matrix(s));
            at[t + 1] = acc.log_norm();
        }
        n_grid.iter().map(|&n| at[n] / n as f64).collect()
    }))
}

/// Rows in `n_grid × eps_grid` order (n outer). `-∞` samples always count.
pub fn deviation_tail(c: &Cocycle, l_ref: f64, p: &TailParams) -> Result<TailCurve> {
    p.check()?;
    if !l_ref.is_finite() {
        return Err(Error::Domain(format!("reference exponent {l_ref} must be finite")));
    }
    let xs = prefix_exponents(c, &p.n_grid, p.samples, p.seed)?;
    let mut rows = Vec::with_capacity(p.n_grid.len() * p.eps_grid.len());
    for (a, &n) in p.n_grid.iter().enumerate() {
        for &eps in &p.eps_grid {
            let hits = xs.iter().filter(|x| x[a] == f64::NEG_INFINITY || (x[a] - l_ref).abs() > eps).count();
            rows.push(TailRow::new(n, eps, hits as f64 / p.samples as f64, p.samples));
        }
    }
    Ok(TailCurve { l_ref, rows })
}

/// `L̂₁` from a run ten times longer than the longest tail word.
pub fn pilot_reference(c: &Cocycle, p: &TailParams) -> Result<f64> {
    let est = top_exponent_mc(c, &McParams::new(10 * p.n_max(), p.samples, p.seed))?;
    Ok(est.values[0])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LdtFit {
    #[serde(rename = "C_hat")]
    pub big_c_hat: Option<f64>,
    pub c_hat: Option<f64>,
    /// Largest ε among fitted rows.
    pub eps0: Option<f64>,
    /// Weighted residual sum of squares.
    pub residual: Option<f64>,
    pub r2: Option<f64>,
    pub rows_used: usize,
    pub usable: bool,
    pub reason: Option<String>,
}

impl LdtFit {
    fn refused(rows_used: usize, reason: String) -> Self {
        Self {
            big_c_hat: None,
            c_hat: None,
            eps0: None,
            residual: None,
            r2: None,
            rows_used,
            usable: false,
            reason: Some(reason),
        }
    }
}

/// Weighted least squares of `ln p̂` on `(1, −nε²)` over rows with
/// `p̂ ∈ (1e−4, 0.5)`, weights `samples·p̂/(1−p̂)`.
pub fn fit_ldt_rate(t: &TailCurve) -> LdtFit {
    let interior = t.rows.iter().filter(|r| r.p_hat > 0.0 && r.p_hat < 1.0).count();
    if interior < MIN_FIT_ROWS {
        return LdtFit::refused(0, format!("{interior} rows with 0 < p_hat < 1, need {MIN_FIT_ROWS}"));
    }
    let window: Vec<&TailRow> =
        t.rows.iter().filter(|r| r.p_hat > FIT_P_MIN && r.p_hat < FIT_P_MAX).collect();
    if window.len() < 3 {
        return LdtFit::refused(window.len(), format!("{} rows inside the fit window", window.len()));
    }
    let pts: Vec<(f64, f64, f64)> = window
        .iter()
        .map(|r| {
            let x = -(r.n as f64) * r.epsilon * r.epsilon;
            (x, r.p_hat.ln(), r.samples as f64 * r.p_hat / (1.0 - r.p_hat))
        })
        .collect();
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| p.2 * (p.1 - my).powi(2)).sum();
    if sxx <= 0.0 {
        return LdtFit::refused(window.len(), "all fitted rows share one value of n·ε²".into());
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = pts.iter().map(|p| p.2 * (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r2 = if syy > 0.0 { 1.0 - ssr / syy } else { 0.0 };
    let usable = slope > 0.0 && r2 >= MIN_R2;
    let reason = (!usable).then(|| {
        if slope <= 0.0 {
            format!("no decay: c_hat = {slope:.3e}")
        } else {
            format!("poor fit: r2 = {r2:.3}")
        }
    });
    LdtFit {
        big_c_hat: Some(intercept.exp()),
        c_hat: Some(slope),
        eps0: window.iter().map(|r| r.epsilon).reduce(f64::max),
        residual: Some(ssr),
        r2: Some(r2),
        rows_used: window.len(),
        usable,
        reason,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeighborFit {
    pub trial: usize,
    /// Redraws needed before `Θ_k > 0`.
    pub rejected: usize,
    pub ranks: Vec<usize>,
    #[serde(with = "crate::extreal")]
    pub l_ref: f64,
    pub fit: LdtFit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformLdtSummary {
    pub model: String,
    pub k: usize,
    pub radius: f64,
    pub trials: usize,
    pub rejected: usize,
    pub min_c_hat: Option<f64>,
    #[serde(rename = "max_C_hat")]
    pub max_big_c_hat: Option<f64>,
    /// Trials whose fit was refused or whose reference was not finite.
    pub failed: Vec<usize>,
    pub neighbors: Vec<NeighborFit>,
}

/// `I + radius·G/‖G‖₂` with Gaussian `G`; invertible for `radius < 1`.
pub fn near_identity(d: usize, radius: f64, s: &mut Stream) -> Matrix {
    let g = Matrix::from_row_major(d, d, (0..d * d).map(|_| s.normal()).collect()).expect("square");
    let nrm = g.norm2();
    let step = if nrm > 0.0 && radius > 0.0 { g.scaled(radius / nrm) } else { Matrix::zeros(d, d) };
    &Matrix::identity(d) + &step
}

/// `B_i = E_i A_i F_i`; trial `t`, attempt `a` reads stream `(t << 16) | a`.
pub fn perturbed_neighbor(c: &Cocycle, radius: f64, seed: u64, trial: usize, attempt: usize) -> Result<Cocycle> {
    let mut s = Stream::new(seed, Purpose::Perturbation, ((trial as u64) << 16) | attempt as u64);
    let d = c.dim();
    let mats = c
        .matrices()
        .iter()
        .map(|a| {
            let e = near_identity(d, radius, &mut s);
            let f = near_identity(d, radius, &mut s);
            e.matmul(a).matmul(&f)
        })
        .collect();
    Cocycle::new(c.probs().to_vec(), mats)
}

/// Worst LDT constants over `trials` multiplicative neighbours of `c` inside
/// the constant-rank-`k` class. Every neighbour uses the same words.
pub fn uniform_ldt_probe(c: &Cocycle, k: usize, radius: f64, trials: usize, p: &TailParams) -> Result<UniformLdtSummary> {
    p.check()?;
    if !(0.0..1.0).contains(&radius) {
        return Err(Error::Domain(format!("radius {radius} outside [0, 1)")));
    }
    if !theta_positive(c, k, DEFAULT_RANK_TOL)? {
        return Err(Error::Precondition(format!("theta_{k} vanishes for the centre cocycle")));
    }
    let mut neighbors = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut attempt = 0;
        let b = loop {
            let b = perturbed_neighbor(c, radius, p.seed, trial, attempt)?;
            if theta_positive(&b, k, DEFAULT_RANK_TOL)? {
                break b;
            }
            attempt += 1;
            if attempt > MAX_REDRAWS {
                return Err(Error::Precondition(format!("no neighbour with theta_{k} > 0 after {MAX_REDRAWS} redraws")));
            }
        };
        let ranks = b.matrices().iter().map(|m| numeric_rank(m, DEFAULT_RANK_TOL)).collect();
        let l_ref = pilot_reference(&b, p)?;
        let fit = if l_ref.is_finite() {
            fit_ldt_rate(&deviation_tail(&b, l_ref, p)?)
        } else {
            LdtFit::refused(0, "pilot exponent is -inf".into())
        };
        neighbors.push(NeighborFit { trial, rejected: attempt, ranks, l_ref, fit });
    }
    let usable: Vec<&LdtFit> = neighbors.iter().map(|n| &n.fit).filter(|f| f.usable).collect();
    Ok(UniformLdtSummary {
        model: "B_i = E_i A_i F_i, E_i, F_i = I + radius G/|G|_2".into(),
        k,
        radius,
        trials,
        rejected: neighbors.iter().map(|n| n.rejected).sum(),
        min_c_hat: usable.iter().filter_map(|f| f.c_hat).reduce(f64::min),
        max_big_c_hat: usable.iter().filter_map(|f| f.big_c_hat).reduce(f64::max),
        failed: neighbors.iter().filter(|n| !n.fit.usable).map(|n| n.trial).collect(),
        neighbors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial_cocycle() -> Cocycle {
        Cocycle::uniform(vec![Matrix::from_diag(&[2.0]), Matrix::from_diag(&[0.5])]).unwrap()
    }

    fn exact_binomial_tail(n: usize, eps: f64) -> f64 {
        // P(|2K/n − 1| log 2 > ε), K ~ Bin(n, ½), by direct enumeration
        let mut coef = 1.0f64;
        let mut total = 0.0;
        for k in 0..=n {
            if k > 0 {
                coef = coef * (n + 1 - k) as f64 / k as f64;
            }
            if ((2 * k) as f64 / n as f64 - 1.0).abs() * std::f64::consts::LN_2 > eps {
                total += coef;
            }
        }
        total / 2f64.powi(n as i32)
    }

    fn synthetic(f: impl Fn(usize, f64) -> f64) -> TailCurve {
        let mut rows = Vec::new();
        for n in [50, 100, 200, 400] {
            for eps in [0.1, 0.15, 0.2, 0.25] {
                rows.push(TailRow::new(n, eps, f(n, eps), 1000));
            }
        }
        TailCurve { l_ref: 0.0, rows }
    }

    #[test]
    fn exact_model_is_recovered() {
        let t = synthetic(|n, e| 2.0 * (-0.5 * n as f64 * e * e).exp());
        let fit = fit_ldt_rate(&t);
        assert!(fit.usable);
        assert!((fit.big_c_hat.unwrap() - 2.0).abs() < 1e-6);
        assert!((fit.c_hat.unwrap() - 0.5).abs() < 1e-6);
        assert!(fit.residual.unwrap() < 1e-12);
    }

    #[test]
    fn constant_tail_is_unusable() {
        let fit = fit_ldt_rate(&synthetic(|_, _| 0.2));
        assert!(!fit.usable);
        assert!(fit.c_hat.unwrap().abs() < 1e-12);
        assert!(fit.reason.is_some());
    }

    #[test]
    fn too_few_rows_refused() {
        let t = TailCurve { l_ref: 0.0, rows: vec![TailRow::new(5, 0.1, 0.3, 100); 3] };
        let fit = fit_ldt_rate(&t);
        assert!(!fit.usable && fit.c_hat.is_none());
    }

    #[test]
    fn rotations_never_deviate() {
        let (c, s) = (0.6f64, 0.8f64);
        let r = Matrix::from_rows(&[vec![c, -s], vec![s, c]]).unwrap();
        let cyc = Cocycle::uniform(vec![r.clone(), r.transpose()]).unwrap();
        let p = TailParams { n_grid: vec![5, 50], eps_grid: vec![1e-6, 0.1], samples: 50, seed: 3 };
        let t = deviation_tail(&cyc, 0.0, &p).unwrap();
        assert!(t.rows.iter().all(|r| r.p_hat == 0.0 && r.stderr == 0.0));
    }

    #[test]
    fn binomial_tail_matches_enumeration() {
        let p = TailParams { n_grid: vec![10, 20, 30], eps_grid: vec![0.13, 0.23, 0.33], samples: 20000, seed: 11 };
        let t = deviation_tail(&binomial_cocycle(), 0.0, &p).unwrap();
        for r in &t.rows {
            let exact = exact_binomial_tail(r.n, r.epsilon);
            let sd = (exact * (1.0 - exact) / r.samples as f64).sqrt();
            assert!((r.p_hat - exact).abs() <= 4.0 * sd + 1e-12, "{r:?} vs {exact}");
        }
    }

    #[test]
    fn tail_is_monotone_in_epsilon() {
        let p = TailParams { n_grid: vec![7, 15], eps_grid: vec![0.05, 0.1, 0.2, 0.4], samples: 500, seed: 2 };
        let t = deviation_tail(&binomial_cocycle(), 0.1, &p).unwrap();
        for w in t.rows.chunks(4) {
            assert!(w.windows(2).all(|x| x[1].p_hat <= x[0].p_hat));
        }
    }

    #[test]
    fn zero_products_count_for_every_epsilon() {
        let proj = Matrix::from_diag(&[1.0, 0.0]);
        let rot = Matrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let c = Cocycle::uniform(vec![proj, rot]).unwrap();
        let p = TailParams { n_grid: vec![3, 40], eps_grid: vec![0.1, 100.0], samples: 400, seed: 5 };
        let t = deviation_tail(&c, 0.0, &p).unwrap();
        let long: Vec<f64> = t.rows.iter().filter(|r| r.n == 40).map(|r| r.p_hat).collect();
        assert!(long.iter().all(|&x| x > 0.99));
        let short: Vec<f64> = t.rows.iter().filter(|r| r.n == 3).map(|r| r.p_hat).collect();
        assert!(short[1] > 0.0 && short[1] < long[1]);
    }

    #[test]
    fn perturbation_keeps_rank_and_zero_radius_is_identity() {
        let a = Matrix::outer(&[1.0, 2.0, 0.5], &[0.3, -1.0, 1.0]);
        let c = Cocycle::uniform(vec![a.clone(), a.transpose()]).unwrap();
        let same = perturbed_neighbor(&c, 0.0, 1, 0, 0).unwrap();
        assert_eq!(same, c);
        for t in 0..10 {
            let b = perturbed_neighbor(&c, 0.3, 1, t, 0).unwrap();
            assert!(b.matrices().iter().all(|m| numeric_rank(m, DEFAULT_RANK_TOL) == 1));
            assert_ne!(b, c);
        }
    }

    #[test]
    fn zero_radius_probe_matches_direct_fit() {
        let c = Cocycle::uniform(vec![
            Matrix::outer(&[1.0, 0.4], &[1.0, 0.2]),
            Matrix::outer(&[0.3, 1.0], &[-0.5, 1.0]),
        ])
        .unwrap();
        let p = TailParams { n_grid: vec![10, 20, 40], eps_grid: vec![0.05, 0.1, 0.15, 0.2], samples: 400, seed: 9 };
        let s = uniform_ldt_probe(&c, 1, 0.0, 2, &p).unwrap();
        let direct = fit_ldt_rate(&deviation_tail(&c, pilot_reference(&c, &p).unwrap(), &p).unwrap());
        assert!(s.neighbors.iter().all(|n| n.fit == direct));
        assert_eq!(s.rejected, 0);
    }
}
