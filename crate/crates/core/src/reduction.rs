//! Reduction of a constant-rank cocycle to an invertible Markov cocycle.
//!
//! With `M_i` an orthonormal basis of `Range(A_i)` and
//! `C_{i,j} = M_iᵗ A_i M_j`, the `k×k` transitions satisfy
//! `M_i C_{i,j} = A_i M_j` and, along `ω_0 ω_1 ⋯ ω_n`,
//!
//! ```text
//! M_{ω_n} C_{ω_n ω_{n-1}} ⋯ C_{ω_1 ω_0} = A_{ω_n} ⋯ A_{ω_1} M_{ω_0}
//! ```
//!
//! The Markov estimators here draw `n + 1` symbols `s_0 … s_n` from the same
//! stream as the Bernoulli estimators and set `ω_t = s_{t-1}` for `t ≥ 1`,
//! `ω_0 = s_n`. Then `A_{ω_n} ⋯ A_{ω_1}` is exactly the product the
//! Bernoulli estimator forms for the same `(seed, index)`.

use serde::{Deserialize, Serialize};

use crate::cocycle::{
    theta_positive, validate, Cocycle, ScaledMatrix, SymbolSampler, Word,
};
use crate::error::{Error, Result};
use crate::linalg::{
    numeric_rank, orthonormal_range_basis, singular_values, svd, Matrix,
};
use crate::lyapunov::{qr_trajectory, random_frame, LyapunovEstimate, McParams};
use crate::mc::{mean_stderr, par_samples};
use crate::rng::{Purpose, Stream};

/// Tolerance on `MᵗM = I` and on the range condition when bases are supplied.
pub const BASIS_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedCocycle {
    pub k: usize,
    pub probs: Vec<f64>,
    /// `M_i`, `d×k` with orthonormal columns.
    pub bases: Vec<Matrix>,
    /// `transitions[i][j] = C_{i,j} = M_iᵗ A_i M_j`.
    pub transitions: Vec<Vec<Matrix>>,
}

impl ReducedCocycle {
    pub fn symbols(&self) -> usize {
        self.bases.len()
    }

    pub fn dim(&self) -> usize {
        self.bases[0].rows()
    }

    pub fn transition(&self, i: usize, j: usize) -> &Matrix {
        &self.transitions[i][j]
    }

    /// Structural and numerical checks of the stored data.
    pub fn check(&self, tol: f64) -> Result<()> {
        let m = self.bases.len();
        if m == 0 || self.probs.len() != m || self.transitions.len() != m {
            return Err(Error::Shape("reduced cocycle alphabet sizes disagree".into()));
        }
        let d = self.bases[0].rows();
        for (i, b) in self.bases.iter().enumerate() {
            if b.rows() != d || b.cols() != self.k {
                return Err(Error::Shape(format!("basis {i} is not {d}x{}", self.k)));
            }
            let gram = &b.transpose().matmul(b) - &Matrix::identity(self.k);
            if gram.max_abs() > BASIS_TOL {
                return Err(Error::Precondition(format!("basis {i} is not orthonormal")));
            }
        }
        for (i, row) in self.transitions.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Shape(format!("transition row {i} has {} entries", row.len())));
            }
            for (j, t) in row.iter().enumerate() {
                if t.rows() != self.k || t.cols() != self.k {
                    return Err(Error::Shape(format!("C[{i}][{j}] is not {0}x{0}", self.k)));
                }
                if numeric_rank(t, tol) != self.k {
                    return Err(Error::Precondition(format!("C[{i}][{j}] is not invertible")));
                }
            }
        }
        Ok(())
    }
}

fn require_reducible(c: &Cocycle, k: usize, tol: f64) -> Result<()> {
    let report = validate(c, tol);
    if report.constant_rank != Some(k) {
        return Err(Error::Precondition(format!(
            "cocycle is not of constant rank {k} (ranks {:?})",
            report.ranks
        )));
    }
    if !theta_positive(c, k, tol)? {
        return Err(Error::Precondition(format!(
            "Theta_{k} vanishes: some A_i A_j has rank below {k}, so L_{k} = -inf and the reduction is undefined"
        )));
    }
    Ok(())
}

/// Bases from the leading left singular vectors (canonical signs) and the
/// transitions `C_{i,j} = M_iᵗ A_i M_j`.
pub fn reduce(c: &Cocycle, k: usize, tol: f64) -> Result<ReducedCocycle> {
    require_reducible(c, k, tol)?;
    let bases = c
        .matrices()
        .iter()
        .map(|a| orthonormal_range_basis(a, k, tol))
        .collect::<Result<Vec<_>>>()?;
    reduce_with_bases(c, bases, tol)
}

/// Same as [`reduce`] with caller-chosen orthonormal range bases.
pub fn reduce_with_bases(c: &Cocycle, bases: Vec<Matrix>, tol: f64) -> Result<ReducedCocycle> {
    let m = c.symbols();
    if bases.len() != m {
        return Err(Error::Shape(format!("{} bases for {m} symbols", bases.len())));
    }
    let k = bases[0].cols();
    require_reducible(c, k, tol)?;
    for (i, (b, a)) in bases.iter().zip(c.matrices()).enumerate() {
        if b.rows() != c.dim() || b.cols() != k {
            return Err(Error::Shape(format!("basis {i} is not {}x{k}", c.dim())));
        }
        // range condition: (I - M Mᵗ) A = 0
        let resid = a - &b.matmul(&b.transpose().matmul(a));
        if resid.max_abs() > BASIS_TOL * a.norm2().max(f64::MIN_POSITIVE) * (c.dim() as f64).sqrt() {
            return Err(Error::Precondition(format!("basis {i} does not span Range(A_{i})")));
        }
    }
    let transitions = (0..m)
        .map(|i| {
            let left = bases[i].transpose().matmul(c.matrix(i));
            (0..m).map(|j| left.matmul(&bases[j])).collect()
        })
        .collect();
    let r = ReducedCocycle { k, probs: c.probs().to_vec(), bases, transitions };
    r.check(tol)?;
    Ok(r)
}

/// `max_{i,j} max |M_i C_{i,j} − A_i M_j|`.
pub fn intertwining_residual(c: &Cocycle, r: &ReducedCocycle) -> f64 {
    let m = r.symbols();
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            let lhs = r.bases[i].matmul(r.transition(i, j));
            let rhs = c.matrix(i).matmul(&r.bases[j]);
            worst = worst.max((&lhs - &rhs).max_abs());
        }
    }
    worst
}

/// `min_{i,j} s_k(C_{i,j})`.
pub fn min_transition_singular_value(r: &ReducedCocycle) -> f64 {
    r.transitions
        .iter()
        .flatten()
        .map(|t| singular_values(t)[r.k - 1])
        .fold(f64::INFINITY, f64::min)
}

/// `κ = min_{i,j} s_k(V_jᵗ M_i)`, `V_j` the leading right singular vectors of
/// `A_j`. Norm ratios `‖Aⁿ(σω)‖ / ‖Cⁿ(ω)‖` lie in `[1, 1/κ]`.
pub fn kappa(c: &Cocycle, r: &ReducedCocycle) -> f64 {
    let k = r.k;
    let rows: Vec<Matrix> = c
        .matrices()
        .iter()
        .map(|a| svd(a).v.leading_columns(k).transpose())
        .collect();
    let mut out = f64::INFINITY;
    for v in &rows {
        for b in &r.bases {
            out = out.min(singular_values(&v.matmul(b))[k - 1]);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemiConjugacyReport {
    /// `ω_0 ω_1 … ω_n`.
    pub word: Vec<usize>,
    /// `‖M_{ω_n} Cⁿ − Aⁿ(σω) M_{ω_0}‖ / (1 + ‖Cⁿ‖)`.
    pub residual: f64,
    /// `‖Aⁿ(σω)‖ / ‖Cⁿ(ω)‖`.
    pub ratio: f64,
    /// `1/κ`.
    pub ratio_bound: f64,
}

fn softplus_log(x: f64) -> f64 {
    // ln(1 + e^x)
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Checks the intertwining identity along `w = ω_0 … ω_n` (length ≥ 2).
pub fn verify_semiconjugacy(c: &Cocycle, r: &ReducedCocycle, w: &Word) -> Result<SemiConjugacyReport> {
    let s = w.symbols();
    if s.len() < 2 {
        return Err(Error::Domain("semi-conjugacy needs a word ω_0 … ω_n with n ≥ 1".into()));
    }
    if c.symbols() != r.symbols() || c.dim() != r.dim() {
        return Err(Error::Shape("cocycle and reduction disagree in alphabet or dimension".into()));
    }
    if let Some(&bad) = s.iter().find(|&&x| x >= c.symbols()) {
        return Err(Error::Domain(format!("symbol {bad} outside alphabet")));
    }
    let (a_n, c_n, am) = semiconjugacy_products(c, r, s);
    let ratio = (a_n.log_norm() - c_n.log_norm()).exp();
    let residual = matched_residual(&r.bases[s[s.len() - 1]], &c_n, &am);
    Ok(SemiConjugacyReport {
        word: s.to_vec(),
        residual,
        ratio,
        ratio_bound: 1.0 / kappa(c, r),
    })
}

/// `(Aⁿ(σω), Cⁿ(ω), Aⁿ(σω) M_{ω_0})`, each renormalized.
fn semiconjugacy_products(
    c: &Cocycle,
    r: &ReducedCocycle,
    s: &[usize],
) -> (ScaledMatrix, ScaledMatrix, ScaledMatrix) {
    let mut a_n = ScaledMatrix::identity(c.dim());
    let mut c_n = ScaledMatrix::identity(r.k);
    let mut am = ScaledMatrix::new(r.bases[s[0]].clone());
    for t in 1..s.len() {
        let a = c.matrix(s[t]);
        a_n.push_left(a);
        am.push_left(a);
        c_n.push_left(r.transition(s[t], s[t - 1]));
    }
    (a_n, c_n, am)
}

/// Relative residual of `M Cⁿ` against `Aⁿ M_{ω_0}` at a common scale.
fn matched_residual(m_last: &Matrix, c_n: &ScaledMatrix, am: &ScaledMatrix) -> f64 {
    if c_n.is_zero() || am.is_zero() {
        return if c_n.is_zero() && am.is_zero() { 0.0 } else { f64::INFINITY };
    }
    let e = c_n.exponent().max(am.exponent());
    let lhs = m_last.matmul(c_n.mantissa()).scaled(2f64.powi((c_n.exponent() - e) as i32));
    let rhs = am.mantissa().scaled(2f64.powi((am.exponent() - e) as i32));
    let diff = (&lhs - &rhs).norm2();
    if diff == 0.0 {
        return 0.0;
    }
    let log_r = e as f64 * std::f64::consts::LN_2 + diff.ln() - softplus_log(c_n.log_norm());
    log_r.exp()
}

/// `ω_0 … ω_n` for sample `index`, matched to the Bernoulli word of length n.
pub fn matched_markov_word(sampler: &SymbolSampler, n: usize, seed: u64, index: u64) -> Vec<usize> {
    let mut stream = Stream::new(seed, Purpose::Word, index);
    let draws: Vec<usize> = (0..=n).map(|_| sampler.draw(&mut stream)).collect();
    let mut omega = Vec::with_capacity(n + 1);
    omega.push(draws[n]);
    omega.extend_from_slice(&draws[..n]);
    omega
}

pub(crate) fn markov_top_samples(r: &ReducedCocycle, p: &McParams) -> Result<Vec<f64>> {
    check_params(p)?;
    let sampler = SymbolSampler::new(&r.probs)?;
    Ok(par_samples(p.samples, |i| {
        let omega = matched_markov_word(&sampler, p.n, p.seed, i);
        let mut acc = ScaledMatrix::identity(r.k);
        for t in 1..omega.len() {
            acc.push_left(r.transition(omega[t], omega[t - 1]));
        }
        acc.log_norm() / p.n as f64
    }))
}

fn check_params(p: &McParams) -> Result<()> {
    if p.n == 0 || p.samples == 0 {
        return Err(Error::Domain("need n >= 1 and samples >= 1".into()));
    }
    Ok(())
}

/// Top exponent of the Markov cocycle `C`.
pub fn markov_top_exponent(r: &ReducedCocycle, p: &McParams) -> Result<LyapunovEstimate> {
    let rows: Vec<Vec<f64>> = markov_top_samples(r, p)?.into_iter().map(|x| vec![x]).collect();
    Ok(LyapunovEstimate::from_samples(&rows, p.n))
}

/// First `i_max ≤ k` exponents of the Markov cocycle by QR deflation.
pub fn markov_spectrum_qr(r: &ReducedCocycle, i_max: usize, p: &McParams, rank_tol: f64) -> Result<LyapunovEstimate> {
    check_params(p)?;
    if i_max == 0 || i_max > r.k {
        return Err(Error::Domain(format!("i_max = {i_max} outside 1..={}", r.k)));
    }
    let sampler = SymbolSampler::new(&r.probs)?;
    let norms: Vec<Vec<f64>> =
        r.transitions.iter().map(|row| row.iter().map(Matrix::norm2).collect()).collect();
    let rows = par_samples(p.samples, |i| {
        let omega = matched_markov_word(&sampler, p.n, p.seed, i);
        let frame = random_frame(r.k, i_max, &mut Stream::new(p.seed, Purpose::Frame, i));
        let steps = omega
            .windows(2)
            .map(|w| (r.transition(w[1], w[0]), norms[w[1]][w[0]]));
        qr_trajectory(frame, steps, p.n, rank_tol)
    });
    Ok(LyapunovEstimate::from_samples(&rows, p.n))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumAgreement {
    pub original: LyapunovEstimate,
    pub reduced: LyapunovEstimate,
    #[serde(with = "crate::extreal::vec")]
    pub residuals: Vec<f64>,
    pub combined_stderr: Vec<f64>,
}

impl SpectrumAgreement {
    /// Every residual within `z` combined standard errors.
    pub fn within(&self, z: f64) -> bool {
        self.residuals.iter().zip(&self.combined_stderr).all(|(r, s)| *r <= z * s)
    }
}

/// `|L̂_i(A) − L̂_i(C)|` for `i ≤ i_max`, both by QR deflation at matched words.
pub fn spectrum_agreement(
    c: &Cocycle,
    r: &ReducedCocycle,
    i_max: usize,
    p: &McParams,
    rank_tol: f64,
) -> Result<SpectrumAgreement> {
    if i_max > r.k {
        return Err(Error::Domain(format!("i_max = {i_max} exceeds k = {}", r.k)));
    }
    let original = crate::lyapunov::spectrum_qr_with_tol(c, i_max, p, rank_tol)?;
    let reduced = markov_spectrum_qr(r, i_max, p, rank_tol)?;
    let residuals = original
        .values
        .iter()
        .zip(&reduced.values)
        .map(|(a, b)| if a == b { 0.0 } else { (a - b).abs() })
        .collect();
    let combined_stderr =
        original.stderr.iter().zip(&reduced.stderr).map(|(a, b)| a.hypot(*b)).collect();
    Ok(SpectrumAgreement { original, reduced, residuals, combined_stderr })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioBucket {
    /// Words with length in `(previous bound, max_len]`.
    pub max_len: usize,
    pub words: usize,
    /// Largest `max(ratio, 1/ratio)` in the bucket.
    pub c_hat: f64,
    /// Largest `n⁻¹ |log ratio|` in the bucket.
    pub max_log_ratio_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRatioReport {
    pub words: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Empirical constant: every observed ratio lies in `[1/ĉ, ĉ]`.
    pub c_hat: f64,
    pub kappa: f64,
    /// Observed ratios outside `[1, 1/κ]` (up to `1e-9` relative).
    pub outside_kappa_bound: usize,
    pub max_residual: f64,
    pub buckets: Vec<RatioBucket>,
}

impl NormRatioReport {
    /// ĉ does not grow with length: every bucket's ĉ is at least `ĉ / factor`.
    pub fn buckets_consistent(&self, factor: f64) -> bool {
        self.buckets.iter().filter(|b| b.words > 0).all(|b| b.c_hat * factor >= self.c_hat)
    }
}

/// Semi-conjugacy over `words` random words with lengths uniform in
/// `1..=max(bucket_bounds)`, bucketed by length.
pub fn norm_ratio_study(
    c: &Cocycle,
    r: &ReducedCocycle,
    words: usize,
    bucket_bounds: &[usize],
    seed: u64,
) -> Result<NormRatioReport> {
    let max_len = *bucket_bounds
        .iter()
        .max()
        .ok_or_else(|| Error::Domain("no length buckets".into()))?;
    let sampler = SymbolSampler::new(&r.probs)?;
    let kap = kappa(c, r);
    let rows: Vec<(usize, f64, f64)> = par_samples(words, |i| {
        let mut stream = Stream::new(seed, Purpose::Custom(0x5241_5449_4f), i);
        let n = 1 + stream.below(max_len);
        let omega = matched_markov_word(&sampler, n, seed, i);
        let (a_n, c_n, am) = semiconjugacy_products(c, r, &omega);
        let ratio = (a_n.log_norm() - c_n.log_norm()).exp();
        let resid = matched_residual(&r.bases[omega[n]], &c_n, &am);
        (n, ratio, resid)
    });
    let mut bounds = bucket_bounds.to_vec();
    bounds.sort_unstable();
    let mut buckets: Vec<RatioBucket> = bounds
        .iter()
        .map(|&b| RatioBucket { max_len: b, words: 0, c_hat: 1.0, max_log_ratio_rate: 0.0 })
        .collect();
    let mut report = NormRatioReport {
        words,
        min_ratio: f64::INFINITY,
        max_ratio: 0.0,
        c_hat: 1.0,
        kappa: kap,
        outside_kappa_bound: 0,
        max_residual: 0.0,
        buckets: Vec::new(),
    };
    for &(n, ratio, resid) in &rows {
        let sym = ratio.max(1.0 / ratio);
        report.min_ratio = report.min_ratio.min(ratio);
        report.max_ratio = report.max_ratio.max(ratio);
        report.c_hat = report.c_hat.max(sym);
        report.max_residual = report.max_residual.max(resid);
        if ratio < 1.0 - 1e-9 || ratio > (1.0 + 1e-9) / kap {
            report.outside_kappa_bound += 1;
        }
        if let Some(b) = buckets.iter_mut().find(|b| n <= b.max_len) {
            b.words += 1;
            b.c_hat = b.c_hat.max(sym);
            b.max_log_ratio_rate = b.max_log_ratio_rate.max(ratio.ln().abs() / n as f64);
        }
    }
    report.buckets = buckets;
    Ok(report)
}

/// Mean and standard error of `n⁻¹ log ‖Cⁿ‖ − n⁻¹ log ‖Aⁿ(σω)‖` per sample;
/// bounded by `n⁻¹ log(1/κ)` in absolute value.
pub fn paired_top_difference(c: &Cocycle, r: &ReducedCocycle, p: &McParams) -> Result<(f64, f64)> {
    let a = crate::lyapunov::top_exponent_samples(c, p)?;
    let b = markov_top_samples(r, p)?;
    let d: Vec<f64> = a.iter().zip(&b).map(|(x, y)| y - x).collect();
    Ok(mean_stderr(&d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::sample_word;
    use crate::linalg::DEFAULT_RANK_TOL;
    use crate::lyapunov::top_exponent_mc;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn rank_two_in_four(seed: u64) -> Cocycle {
        let mut s = Stream::new(seed, Purpose::Custom(1), 0);
        let mut g = |r, c| {
            let rows: Vec<Vec<f64>> = (0..r).map(|_| (0..c).map(|_| s.normal()).collect()).collect();
            Matrix::from_rows(&rows).unwrap()
        };
        let mats = (0..3).map(|_| g(4, 2).matmul(&g(2, 4)).scaled(0.5)).collect();
        Cocycle::new(vec![0.2, 0.3, 0.5], mats).unwrap()
    }

    #[test]
    fn invertible_reduction_preserves_singular_values() {
        let a = m(&[&[1.0, 2.0], &[0.5, -1.0]]);
        let b = m(&[&[0.3, 0.0], &[1.0, 1.5]]);
        let c = Cocycle::uniform(vec![a, b]).unwrap();
        let r = reduce(&c, 2, DEFAULT_RANK_TOL).unwrap();
        for i in 0..2 {
            let sa = singular_values(c.matrix(i));
            for j in 0..2 {
                let sc = singular_values(r.transition(i, j));
                for (x, y) in sa.iter().zip(&sc) {
                    assert!((x - y).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn projection_reduces_to_one() {
        let c = Cocycle::new(vec![1.0], vec![Matrix::from_diag(&[1.0, 0.0])]).unwrap();
        let r = reduce(&c, 1, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(r.bases[0].to_rows(), vec![vec![1.0], vec![0.0]]);
        assert_eq!(r.transition(0, 0).to_rows(), vec![vec![1.0]]);
    }

    #[test]
    fn rank_one_transition_formula() {
        let us = [[1.0, -2.0, 0.5], [0.3, 1.0, 1.0]];
        let vs = [[0.2, 1.0, -1.0], [1.0, 0.5, 0.4]];
        let c = Cocycle::uniform(vec![Matrix::outer(&us[0], &vs[0]), Matrix::outer(&us[1], &vs[1])])
            .unwrap();
        let r = reduce(&c, 1, DEFAULT_RANK_TOL).unwrap();
        let nrm = |x: &[f64; 3]| x.iter().map(|t| t * t).sum::<f64>().sqrt();
        let dotp = |x: &[f64; 3], y: &[f64; 3]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
        for i in 0..2 {
            for j in 0..2 {
                let expect = nrm(&us[i]) * dotp(&vs[i], &us[j]).abs() / nrm(&us[j]);
                assert!((r.transition(i, j).get(0, 0).abs() - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn vanishing_theta_is_refused() {
        let c = Cocycle::uniform(vec![
            Matrix::outer(&[1.0, 0.0], &[1.0, 0.0]),
            Matrix::outer(&[0.0, 1.0], &[0.0, 1.0]),
        ])
        .unwrap();
        let err = reduce(&c, 1, DEFAULT_RANK_TOL).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref s) if s.contains("reduction is undefined")));
    }

    #[test]
    fn identity_semiconjugacy_is_exact() {
        let c = Cocycle::uniform(vec![Matrix::identity(3), Matrix::identity(3)]).unwrap();
        let r = reduce(&c, 3, DEFAULT_RANK_TOL).unwrap();
        let w = Word::new(vec![0, 1, 1, 0, 1], 2).unwrap();
        let rep = verify_semiconjugacy(&c, &r, &w).unwrap();
        assert_eq!(rep.residual, 0.0);
        assert_eq!(rep.ratio, 1.0);
    }

    #[test]
    fn semiconjugacy_at_roundoff_and_after_sign_flip() {
        let c = rank_two_in_four(3);
        let r = reduce(&c, 2, DEFAULT_RANK_TOL).unwrap();
        assert!(intertwining_residual(&c, &r) < 1e-12);
        let w = sample_word(c.probs(), 51, 8, 0).unwrap();
        assert!(verify_semiconjugacy(&c, &r, &w).unwrap().residual <= 1e-9);

        let mut bases = r.bases.clone();
        for i in 0..4 {
            let x = bases[1].get(i, 0);
            bases[1].set(i, 0, -x);
        }
        let flipped = reduce_with_bases(&c, bases, DEFAULT_RANK_TOL).unwrap();
        assert_ne!(flipped.transitions, r.transitions);
        assert!(verify_semiconjugacy(&c, &flipped, &w).unwrap().residual <= 1e-9);
    }

    #[test]
    fn ratios_respect_kappa_bound() {
        let c = rank_two_in_four(5);
        let r = reduce(&c, 2, DEFAULT_RANK_TOL).unwrap();
        let rep = norm_ratio_study(&c, &r, 200, &[50, 100, 200], 1).unwrap();
        assert_eq!(rep.outside_kappa_bound, 0);
        assert!(rep.min_ratio >= 1.0 - 1e-9);
        assert!(rep.max_residual <= 1e-9);
        assert!(rep.c_hat <= 1.0 / rep.kappa * (1.0 + 1e-9));
    }

    #[test]
    fn matched_word_reproduces_bernoulli_product() {
        let c = rank_two_in_four(9);
        let sampler = SymbolSampler::new(c.probs()).unwrap();
        let w = sampler.word(30, 4, 2);
        let omega = matched_markov_word(&sampler, 30, 4, 2);
        assert_eq!(&omega[1..], w.symbols());
    }

    #[test]
    fn markov_identity_transitions_have_zero_exponent() {
        let c = Cocycle::uniform(vec![Matrix::identity(2), Matrix::identity(2)]).unwrap();
        let r = reduce(&c, 2, DEFAULT_RANK_TOL).unwrap();
        let est = markov_top_exponent(&r, &McParams::new(100, 10, 0)).unwrap();
        assert_eq!(est.values[0], 0.0);
    }

    #[test]
    fn markov_matches_original_top_exponent() {
        let c = rank_two_in_four(11);
        let r = reduce(&c, 2, DEFAULT_RANK_TOL).unwrap();
        let p = McParams::new(400, 100, 3);
        let a = top_exponent_mc(&c, &p).unwrap();
        let b = markov_top_exponent(&r, &p).unwrap();
        let tol = 3.0 * a.stderr[0].hypot(b.stderr[0]);
        assert!((a.values[0] - b.values[0]).abs() <= tol);
        // matched words: per-sample gap is at most n⁻¹ log(1/κ)
        let (gap, _) = paired_top_difference(&c, &r, &p).unwrap();
        assert!(gap.abs() <= (1.0 / kappa(&c, &r)).ln() / p.n as f64 + 1e-12);
    }

    #[test]
    fn spectrum_agreement_on_rank_two() {
        let c = rank_two_in_four(13);
        let r = reduce(&c, 2, DEFAULT_RANK_TOL).unwrap();
        let ag = spectrum_agreement(&c, &r, 2, &McParams::new(400, 60, 5), DEFAULT_RANK_TOL).unwrap();
        assert!(ag.within(3.0), "{:?} vs {:?}", ag.residuals, ag.combined_stderr);
    }

    #[test]
    fn reduced_round_trips_through_json() {
        let r = reduce(&rank_two_in_four(2), 2, DEFAULT_RANK_TOL).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<ReducedCocycle>(&s).unwrap(), r);
    }
}
