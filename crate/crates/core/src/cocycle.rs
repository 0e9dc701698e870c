//! Random cocycles over a finite alphabet.
//!
//! A [`Cocycle`] is a probability vector `p` together with matrices
//! `A_0, …, A_{m-1}`. Symbols are 0-based. Products along a word `w` are
//! taken right to left, `Aⁿ = A_{w_{n-1}} ⋯ A_{w_0}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    binomial, exterior_power, numeric_rank, singular_values, Matrix, DEFAULT_RANK_TOL,
    MAX_EXTERIOR_DIM,
};
use crate::rng::{Purpose, Stream};

/// Longest word accepted by the unscaled [`product`].
pub const MAX_PLAIN_PRODUCT_LEN: usize = 60;

/// Tolerance on `Σ p_j = 1`.
pub const PROB_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle {
    d: usize,
    probs: Vec<f64>,
    matrices: Vec<Matrix>,
}

impl Cocycle {
    /// Checks structure only: one square `d×d` matrix per probability. The
    /// probability vector itself is checked by [`validate`] and by samplers.
    pub fn new(probs: Vec<f64>, matrices: Vec<Matrix>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::Shape("cocycle needs at least one matrix".into()));
        }
        if probs.len() != matrices.len() {
            return Err(Error::Shape(format!(
                "{} probabilities for {} matrices",
                probs.len(),
                matrices.len()
            )));
        }
        if let Some(j) = probs.iter().position(|p| !p.is_finite()) {
            return Err(Error::Input(format!("probability {j} is not finite")));
        }
        let d = matrices[0].rows();
        for (j, a) in matrices.iter().enumerate() {
            if a.rows() != d || a.cols() != d {
                return Err(Error::Shape(format!(
                    "matrix {j} is {}x{}, expected {d}x{d}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        Ok(Self { d, probs, matrices })
    }

    /// Uniform probabilities over the given matrices.
    pub fn uniform(matrices: Vec<Matrix>) -> Result<Self> {
        let m = matrices.len().max(1);
        Self::new(vec![1.0 / m as f64; matrices.len()], matrices)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn symbols(&self) -> usize {
        self.matrices.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn matrix(&self, j: usize) -> &Matrix {
        &self.matrices[j]
    }

    /// Same probabilities, every matrix replaced by `f(A_j)`.
    pub fn map_matrices(&self, f: impl Fn(&Matrix) -> Result<Matrix>) -> Result<Self> {
        let mats = self.matrices.iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(self.probs.clone(), mats)
    }

    /// Every matrix multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            d: self.d,
            probs: self.probs.clone(),
            matrices: self.matrices.iter().map(|a| a.scaled(lambda)).collect(),
        }
    }
}

/// A finite word over `{0, …, m-1}`; `symbols()[0]` acts first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(symbols: Vec<usize>, m: usize) -> Result<Self> {
        if let Some(&s) = symbols.iter().find(|&&s| s >= m) {
            return Err(Error::Domain(format!("symbol {s} outside alphabet of size {m}")));
        }
        Ok(Self(symbols))
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation `self` then `other` (`other` acts after `self`).
    pub fn concat(&self, other: &Word) -> Word {
        Word([self.0.as_slice(), other.0.as_slice()].concat())
    }
}

/// Probability-vector defects, empty when the vector is a valid law.
pub fn prob_defects(probs: &[f64]) -> Vec<String> {
    let mut out = Vec::new();
    for (j, &p) in probs.iter().enumerate() {
        if !p.is_finite() {
            out.push(format!("p[{j}] is not finite"));
        } else if p < 0.0 {
            out.push(format!("p[{j}] = {p} is negative"));
        }
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > PROB_SUM_TOL {
        out.push(format!("sum = {sum}"));
    }
    out
}

/// Inverse-CDF sampler for a fixed law on `{0, …, m-1}`.
#[derive(Clone, Debug)]
pub struct SymbolSampler {
    cumulative: Vec<f64>,
}

impl SymbolSampler {
    /// Zero entries are accepted and never drawn; negative entries or a sum
    /// away from 1 are rejected.
    pub fn new(probs: &[f64]) -> Result<Self> {
        let defects = prob_defects(probs);
        if !defects.is_empty() {
            return Err(Error::Domain(format!("invalid probability vector: {}", defects.join("; "))));
        }
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        let last = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        for c in &mut cumulative[last..] {
            *c = 1.0;
        }
        Ok(Self { cumulative })
    }

    pub fn draw(&self, stream: &mut Stream) -> usize {
        let u = stream.uniform();
        self.cumulative.iter().position(|&c| u < c).unwrap_or(self.cumulative.len() - 1)
    }

    /// Word `(seed, index)` of length `n` on the [`Purpose::Word`] streams.
    pub fn word(&self, n: usize, seed: u64, index: u64) -> Word {
        let mut s = Stream::new(seed, Purpose::Word, index);
        Word((0..n).map(|_| self.draw(&mut s)).collect())
    }
}

/// Bernoulli word of length `n`; a pure function of `(probs, n, seed, index)`.
pub fn sample_word(probs: &[f64], n: usize, seed: u64, index: u64) -> Result<Word> {
    Ok(SymbolSampler::new(probs)?.word(n, seed, index))
}

fn check_word(c: &Cocycle, w: &Word) -> Result<()> {
    match w.symbols().iter().find(|&&s| s >= c.symbols()) {
        Some(s) => Err(Error::Domain(format!(
            "symbol {s} outside alphabet of size {}",
            c.symbols()
        ))),
        None => Ok(()),
    }
}

/// Plain product `A_{w_{n-1}} ⋯ A_{w_0}` for words of length at most 60.
pub fn product(c: &Cocycle, w: &Word) -> Result<Matrix> {
    check_word(c, w)?;
    if w.len() > MAX_PLAIN_PRODUCT_LEN {
        return Err(Error::Domain(format!(
            "word length {} exceeds {MAX_PLAIN_PRODUCT_LEN}; use scaled_product",
            w.len()
        )));
    }
    Ok(w.symbols()
        .iter()
        .fold(Matrix::identity(c.dim()), |acc, &s| c.matrix(s).matmul(&acc)))
}

fn binary_exponent(x: f64) -> i64 {
    let bits = x.abs().to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    if biased == 0 {
        binary_exponent(x * 2f64.powi(64)) - 64
    } else {
        biased - 1023
    }
}

fn scale_pow2(m: &mut Matrix, mut e: i64) {
    while e != 0 {
        let step = e.clamp(-1000, 1000);
        m.scale_in_place(f64::from_bits(((1023 + step) as u64) << 52));
        e -= step;
    }
}

/// A matrix stored as `mantissa · 2^exponent` with `max|mantissa| ∈ [1, 2)`.
///
/// Renormalization is by exact powers of two, so the scaled product is
/// bitwise the same as an unscaled one whenever the latter does not
/// overflow or underflow.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledMatrix {
    mantissa: Matrix,
    exponent: i64,
    zero: bool,
}

impl ScaledMatrix {
    pub fn new(m: Matrix) -> Self {
        let mut s = Self { mantissa: m, exponent: 0, zero: false };
        s.renormalize();
        s
    }

    pub fn identity(d: usize) -> Self {
        Self::new(Matrix::identity(d))
    }

    fn renormalize(&mut self) {
        let top = self.mantissa.max_abs();
        if top == 0.0 {
            self.zero = true;
            return;
        }
        let e = binary_exponent(top);
        scale_pow2(&mut self.mantissa, -e);
        self.exponent += e;
    }

    /// `self ← a · self`.
    pub fn push_left(&mut self, a: &Matrix) {
        if self.zero {
            return;
        }
        self.mantissa = a.matmul(&self.mantissa);
        self.renormalize();
    }

    /// `self ← self · a`.
    pub fn push_right(&mut self, a: &Matrix) {
        if self.zero {
            return;
        }
        self.mantissa = self.mantissa.matmul(a);
        self.renormalize();
    }

    /// True once the product has become exactly the zero matrix.
    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn mantissa(&self) -> &Matrix {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// `log ‖·‖₂`, or `-∞` for the zero matrix.
    pub fn log_norm(&self) -> f64 {
        if self.zero {
            return f64::NEG_INFINITY;
        }
        self.exponent as f64 * std::f64::consts::LN_2 + self.mantissa.norm2().ln()
    }

    /// The represented matrix; may overflow or underflow.
    pub fn to_matrix(&self) -> Matrix {
        let mut m = self.mantissa.clone();
        if self.zero {
            return Matrix::zeros(m.rows(), m.cols());
        }
        scale_pow2(&mut m, self.exponent);
        m
    }
}

/// `log ‖Aⁿ‖` together with `Aⁿ / ‖Aⁿ‖` (absent for a zero product).
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledProduct {
    pub log_norm: f64,
    pub direction: Option<Matrix>,
}

pub fn scaled_product(c: &Cocycle, w: &Word) -> Result<ScaledProduct> {
    check_word(c, w)?;
    let mut acc = ScaledMatrix::identity(c.dim());
    for &s in w.symbols() {
        acc.push_left(c.matrix(s));
    }
    Ok(finish(&acc))
}

pub(crate) fn finish(acc: &ScaledMatrix) -> ScaledProduct {
    if acc.is_zero() {
        return ScaledProduct { log_norm: f64::NEG_INFINITY, direction: None };
    }
    let nrm = acc.mantissa().norm2();
    ScaledProduct {
        log_norm: acc.log_norm(),
        direction: Some(acc.mantissa().scaled(1.0 / nrm)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub dim: usize,
    pub symbols: usize,
    pub prob_defects: Vec<String>,
    /// All probabilities strictly positive.
    pub interior: bool,
    pub ranks: Vec<usize>,
    /// `Some(k)` when every matrix has numeric rank `k`.
    pub constant_rank: Option<usize>,
    pub rank_tol: f64,
}

pub fn validate(c: &Cocycle, tol: f64) -> ValidationReport {
    let ranks: Vec<usize> = c.matrices().iter().map(|a| numeric_rank(a, tol)).collect();
    let constant_rank = ranks.iter().all(|&r| r == ranks[0]).then_some(ranks[0]);
    ValidationReport {
        dim: c.dim(),
        symbols: c.symbols(),
        prob_defects: prob_defects(c.probs()),
        interior: c.probs().iter().all(|&p| p > 0.0),
        ranks,
        constant_rank,
        rank_tol: tol,
    }
}

fn require_constant_rank(c: &Cocycle, k: usize, tol: f64) -> Result<()> {
    let report = validate(c, tol);
    match report.constant_rank {
        Some(r) if r == k => Ok(()),
        _ => Err(Error::Precondition(format!(
            "cocycle is not of constant rank {k} (ranks {:?})",
            report.ranks
        ))),
    }
}

fn exterior_norm(a: &Matrix, k: usize) -> Result<f64> {
    Ok(exterior_power(a, k)?.norm2())
}

fn check_exterior_size(d: usize, k: usize) -> Result<()> {
    if k == 0 || k > d {
        return Err(Error::Domain(format!("order {k} outside 1..={d}")));
    }
    if binomial(d, k) > MAX_EXTERIOR_DIM {
        return Err(Error::Size(format!("C({d},{k}) exceeds {MAX_EXTERIOR_DIM}")));
    }
    Ok(())
}

/// Per-pair values `‖∧_k(A_i A_j)‖`, row `i`, column `j`.
pub fn theta_pairs(c: &Cocycle, k: usize) -> Result<Vec<Vec<f64>>> {
    check_exterior_size(c.dim(), k)?;
    let m = c.symbols();
    (0..m)
        .map(|i| (0..m).map(|j| exterior_norm(&c.matrix(i).matmul(c.matrix(j)), k)).collect())
        .collect()
}

/// `Θ_k = min_{i,j} ‖∧_k(A_i A_j)‖` for a constant-rank-`k` cocycle.
pub fn theta_k(c: &Cocycle, k: usize) -> Result<f64> {
    check_exterior_size(c.dim(), k)?;
    require_constant_rank(c, k, DEFAULT_RANK_TOL)?;
    Ok(theta_pairs(c, k)?
        .into_iter()
        .flatten()
        .fold(f64::INFINITY, f64::min))
}

/// Θ_k positivity at relative tolerance: every pair satisfies
/// `‖∧_k(A_i A_j)‖ > tol · ‖∧_k A_i‖ ‖∧_k A_j‖`.
pub fn theta_positive(c: &Cocycle, k: usize, tol: f64) -> Result<bool> {
    check_exterior_size(c.dim(), k)?;
    let single: Vec<f64> =
        c.matrices().iter().map(|a| exterior_norm(a, k)).collect::<Result<_>>()?;
    let pairs = theta_pairs(c, k)?;
    Ok(pairs.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, &t)| t > tol * single[i] * single[j])
    }))
}

/// True iff every pair product `A_i A_j` has numeric rank `k`.
pub fn pair_rank_check(c: &Cocycle, k: usize, tol: f64) -> bool {
    let m = c.symbols();
    (0..m).all(|i| (0..m).all(|j| numeric_rank(&c.matrix(i).matmul(c.matrix(j)), tol) == k))
}

/// The cocycle `∧_k A` with the same probabilities. Generators of numeric
/// rank below `k` map to the exact zero matrix.
pub fn exterior_cocycle(c: &Cocycle, k: usize, tol: f64) -> Result<Cocycle> {
    check_exterior_size(c.dim(), k)?;
    c.map_matrices(|a| {
        let w = exterior_power(a, k)?;
        if numeric_rank(a, tol) < k {
            Ok(Matrix::zeros(w.rows(), w.cols()))
        } else {
            Ok(w)
        }
    })
}

/// Product `s_1 ⋯ s_k` of the leading singular values.
pub fn leading_volume(a: &Matrix, k: usize) -> f64 {
    singular_values(a).iter().take(k).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn projection_rotation(alpha: f64) -> Cocycle {
        let (c, s) = (alpha.cos(), alpha.sin());
        Cocycle::new(
            vec![0.5, 0.5],
            vec![m(&[&[1.0, 0.0], &[0.0, 0.0]]), m(&[&[c, -s], &[s, c]])],
        )
        .unwrap()
    }

    #[test]
    fn validate_projection_rotation() {
        let r = validate(&projection_rotation(1.0), DEFAULT_RANK_TOL);
        assert_eq!(r.ranks, vec![1, 2]);
        assert_eq!(r.constant_rank, None);
        assert!(r.prob_defects.is_empty());
        assert!(r.interior);
    }

    #[test]
    fn validate_reports_bad_sum() {
        let c = Cocycle::new(vec![0.5, 0.6], vec![Matrix::identity(2), Matrix::identity(2)])
            .unwrap();
        let r = validate(&c, DEFAULT_RANK_TOL);
        assert_eq!(r.prob_defects.len(), 1);
        assert!(r.prob_defects[0].starts_with("sum = 1.1"));
    }

    #[test]
    fn validate_rank_one_pair() {
        let a = Matrix::outer(&[1.0, 2.0, -1.0], &[0.5, 0.0, 3.0]);
        let b = Matrix::outer(&[0.0, 1.0, 1.0], &[2.0, -1.0, 1.0]);
        let r = validate(&Cocycle::uniform(vec![a, b]).unwrap(), DEFAULT_RANK_TOL);
        assert_eq!(r.constant_rank, Some(1));
    }

    #[test]
    fn structural_errors() {
        assert!(Cocycle::new(vec![1.0], vec![]).is_err());
        assert!(Cocycle::new(vec![0.5, 0.5], vec![Matrix::identity(2)]).is_err());
        assert!(Cocycle::new(
            vec![0.5, 0.5],
            vec![Matrix::identity(2), Matrix::identity(3)]
        )
        .is_err());
    }

    #[test]
    fn degenerate_law_gives_constant_word() {
        let w = sample_word(&[1.0, 0.0], 5, 123, 0).unwrap();
        assert_eq!(w.symbols(), &[0, 0, 0, 0, 0]);
        assert!(sample_word(&[0.5, 0.6], 5, 1, 0).is_err());
        assert!(sample_word(&[1.5, -0.5], 5, 1, 0).is_err());
    }

    #[test]
    fn words_are_reproducible() {
        let a = sample_word(&[0.5, 0.5], 50, 9, 4).unwrap();
        assert_eq!(a, sample_word(&[0.5, 0.5], 50, 9, 4).unwrap());
        assert_ne!(a, sample_word(&[0.5, 0.5], 50, 9, 5).unwrap());
    }

    #[test]
    fn symbol_frequency_matches_law() {
        let n = 100_000;
        let w = sample_word(&[0.25, 0.75], n, 2024, 0).unwrap();
        let freq = w.symbols().iter().filter(|&&s| s == 1).count() as f64 / n as f64;
        assert!((freq - 0.75).abs() <= 3.0 * (0.1875f64 / n as f64).sqrt());
    }

    #[test]
    fn empty_word_is_identity() {
        let c = projection_rotation(0.3);
        assert_eq!(product(&c, &Word::new(vec![], 2).unwrap()).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn projection_rotation_projection_vanishes_at_right_angle() {
        let p = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let r = m(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let c = Cocycle::uniform(vec![p, r]).unwrap();
        let w = Word::new(vec![0, 1, 0], 2).unwrap();
        assert!(product(&c, &w).unwrap().is_zero());
        assert_eq!(scaled_product(&c, &w).unwrap().log_norm, f64::NEG_INFINITY);
    }

    #[test]
    fn product_matches_naive_fold() {
        let c = Cocycle::uniform(vec![
            m(&[&[0.3, 1.1, -0.2], &[0.0, 0.9, 0.4], &[-0.7, 0.2, 1.0]]),
            m(&[&[1.2, 0.0, 0.5], &[0.1, -0.8, 0.0], &[0.3, 0.3, 0.3]]),
        ])
        .unwrap();
        let w = sample_word(c.probs(), 10, 5, 0).unwrap();
        let got = product(&c, &w).unwrap();
        // naive oracle: explicit triple loop, newest factor on the left
        let mut acc = vec![vec![0.0; 3]; 3];
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        for &s in w.symbols() {
            let a = c.matrix(s);
            let mut next = vec![vec![0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    for l in 0..3 {
                        next[i][j] += a.get(i, l) * acc[l][j];
                    }
                }
            }
            acc = next;
        }
        for i in 0..3 {
            for j in 0..3 {
                assert!((got.get(i, j) - acc[i][j]).abs() <= 1e-12 * (1.0 + acc[i][j].abs()));
            }
        }
        assert!(product(&c, &Word::new(vec![0; 61], 2).unwrap()).is_err());
    }

    #[test]
    fn rotations_have_zero_log_norm() {
        let (c, s) = (0.7f64.cos(), 0.7f64.sin());
        let rot = Cocycle::new(vec![1.0], vec![m(&[&[c, -s], &[s, c]])]).unwrap();
        let w = Word::new(vec![0; 500], 1).unwrap();
        assert!(scaled_product(&rot, &w).unwrap().log_norm.abs() < 1e-12);
    }

    #[test]
    fn scaled_product_matches_exact_fold() {
        let c = Cocycle::uniform(vec![
            m(&[&[2.0, 1.0], &[0.0, 0.5]]),
            m(&[&[0.3, -1.0], &[1.5, 0.2]]),
        ])
        .unwrap();
        let w = sample_word(c.probs(), 40, 11, 3).unwrap();
        let exact = w.symbols().iter().fold(Matrix::identity(2), |acc, &s| c.matrix(s).matmul(&acc));
        let sp = scaled_product(&c, &w).unwrap();
        assert!((sp.log_norm - exact.norm2().ln()).abs() <= 1e-9);
        let dir = sp.direction.unwrap();
        let back = dir.scaled(sp.log_norm.exp());
        assert!((&back - &exact).max_abs() <= 1e-10 * exact.max_abs());
    }

    #[test]
    fn scaled_matrix_survives_long_products() {
        let c = Cocycle::new(vec![1.0], vec![Matrix::from_diag(&[1e-3, 1e-5])]).unwrap();
        let w = Word::new(vec![0; 2000], 1).unwrap();
        let sp = scaled_product(&c, &w).unwrap();
        assert!((sp.log_norm - 2000.0 * 1e-3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn theta_examples() {
        let ident = Cocycle::uniform(vec![Matrix::identity(3), Matrix::identity(3)]).unwrap();
        assert_eq!(theta_k(&ident, 3).unwrap(), 1.0);

        let a = Matrix::outer(&[1.0, 0.0], &[1.0, 0.0]);
        let b = Matrix::outer(&[0.0, 1.0], &[0.0, 1.0]);
        let orth = Cocycle::uniform(vec![a, b]).unwrap();
        assert_eq!(theta_k(&orth, 1).unwrap(), 0.0);
        assert!(!pair_rank_check(&orth, 1, DEFAULT_RANK_TOL));
        assert!(!theta_positive(&orth, 1, DEFAULT_RANK_TOL).unwrap());
        assert!(pair_rank_check(&ident, 3, DEFAULT_RANK_TOL));

        assert!(matches!(theta_k(&orth, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn theta_rank_one_hand_formula() {
        let us = [vec![1.0, 2.0, 0.5], vec![-1.0, 0.3, 2.0]];
        let vs = [vec![0.4, -1.0, 1.0], vec![2.0, 0.1, 0.7]];
        let c = Cocycle::uniform(vec![Matrix::outer(&us[0], &vs[0]), Matrix::outer(&us[1], &vs[1])])
            .unwrap();
        let nrm = |x: &[f64]| x.iter().map(|t| t * t).sum::<f64>().sqrt();
        let dotp = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
        let mut expect = f64::INFINITY;
        for i in 0..2 {
            for j in 0..2 {
                expect = expect.min(nrm(&us[i]) * dotp(&vs[i], &us[j]).abs() * nrm(&vs[j]));
            }
        }
        let got = theta_k(&c, 1).unwrap();
        assert!((got - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn exterior_cocycle_snaps_deficient_generators() {
        let c = Cocycle::uniform(vec![
            Matrix::outer(&[1.0, 1.0], &[0.3, 0.7]),
            Matrix::outer(&[0.2, -1.0], &[1.0, 1.0]),
        ])
        .unwrap();
        let w = exterior_cocycle(&c, 2, DEFAULT_RANK_TOL).unwrap();
        assert!(w.matrices().iter().all(Matrix::is_zero));
    }
}
