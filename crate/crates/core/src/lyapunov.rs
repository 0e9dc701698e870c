//! Monte Carlo Lyapunov exponents.
//!
//! [`top_exponent_mc`] averages `n⁻¹ log ‖Aⁿ‖` over sampled words.
//! [`spectrum_qr`] pushes an orthonormal frame through the word and
//! re-orthonormalizes at every step; the logs of the triangular diagonal give
//! the leading exponents. A frame column whose image is a structural zero
//! (relative to the step matrix norm) makes that exponent and all later ones
//! `-∞` for the sample.

use serde::{Deserialize, Serialize};

use crate::cocycle::{exterior_cocycle, Cocycle, ScaledMatrix, SymbolSampler};
use crate::error::{Error, Result};
use crate::linalg::{binomial, norm, Matrix, DEFAULT_RANK_TOL, MAX_EXTERIOR_DIM};
use crate::mc::{mean_stderr, pairwise_sum, par_samples};
use crate::rng::{Purpose, Stream};

/// Word length, sample count and seed shared by the Monte Carlo estimators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McParams {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for McParams {
    fn default() -> Self {
        Self { n: 2000, samples: 200, seed: 0 }
    }
}

impl McParams {
    pub fn new(n: usize, samples: usize, seed: u64) -> Self {
        Self { n, samples, seed }
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 || self.samples == 0 {
            return Err(Error::Domain(format!(
                "need n >= 1 and samples >= 1 (got n = {}, samples = {})",
                self.n, self.samples
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    #[serde(with = "crate::extreal::vec")]
    pub values: Vec<f64>,
    pub stderr: Vec<f64>,
    pub n: usize,
    pub samples: usize,
    /// Fraction of samples whose product (or first frame column) vanished.
    pub zero_product_fraction: f64,
    /// Per index, the fraction of samples with a `-∞` value.
    pub neg_inf_fraction: Vec<f64>,
}

impl LyapunovEstimate {
    /// Aggregate per-sample rows (each non-increasing) index by index. Any
    /// `-∞` sample makes the aggregate `-∞` with zero standard error.
    pub fn from_samples(rows: &[Vec<f64>], n: usize) -> Self {
        let width = rows.first().map_or(0, Vec::len);
        let samples = rows.len();
        let mut values = Vec::with_capacity(width);
        let mut stderr = Vec::with_capacity(width);
        let mut neg_inf_fraction = Vec::with_capacity(width);
        for j in 0..width {
            let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            let dead = col.iter().filter(|x| **x == f64::NEG_INFINITY).count();
            neg_inf_fraction.push(dead as f64 / samples as f64);
            if dead > 0 {
                values.push(f64::NEG_INFINITY);
                stderr.push(0.0);
            } else {
                let (m, se) = mean_stderr(&col);
                values.push(m);
                stderr.push(se);
            }
        }
        Self {
            values,
            stderr,
            n,
            samples,
            zero_product_fraction: neg_inf_fraction.first().copied().unwrap_or(0.0),
            neg_inf_fraction,
        }
    }

    /// Normal-theory 95% interval for index `j`.
    pub fn ci95(&self, j: usize) -> (f64, f64) {
        let h = 1.96 * self.stderr[j];
        (self.values[j] - h, self.values[j] + h)
    }
}

/// Steps discarded from QR accumulation.
pub fn burn_in(n: usize) -> usize {
    n.div_ceil(10).min(n.saturating_sub(1))
}

/// Per-sample `n⁻¹ log ‖Aⁿ‖` for each word index.
pub(crate) fn top_exponent_samples(c: &Cocycle, p: &McParams) -> Result<Vec<f64>> {
    p.check()?;
    let sampler = SymbolSampler::new(c.probs())?;
    Ok(par_samples(p.samples, |i| {
        let w = sampler.word(p.n, p.seed, i);
        let mut acc = ScaledMatrix::identity(c.dim());
        for &s in w.symbols() {
            acc.push_left(c.matrix(s));
            if acc.is_zero() {
                break;
            }
        }
        acc.log_norm() / p.n as f64
    }))
}

pub fn top_exponent_mc(c: &Cocycle, p: &McParams) -> Result<LyapunovEstimate> {
    let xs = top_exponent_samples(c, p)?;
    let rows: Vec<Vec<f64>> = xs.into_iter().map(|x| vec![x]).collect();
    Ok(LyapunovEstimate::from_samples(&rows, p.n))
}

/// Orthonormal frame from i.i.d. Gaussian columns (Gram–Schmidt, redrawn on
/// the measure-zero event of a degenerate draw).
pub(crate) fn random_frame(d: usize, p: usize, stream: &mut Stream) -> Matrix {
    loop {
        let cols: Vec<Vec<f64>> =
            (0..p).map(|_| (0..d).map(|_| stream.normal()).collect()).collect();
        let mut frame = Matrix::from_columns(&cols).expect("finite gaussian frame");
        if orthonormalize(&mut frame, 1e-8).iter().all(|r| *r > 0.0) {
            return frame;
        }
    }
}

/// In-place modified Gram–Schmidt with one re-orthogonalization pass.
/// Returns the triangular diagonal; a column whose residual norm is at most
/// `floor` gets diagonal 0 and is left as the zero vector.
pub(crate) fn orthonormalize(q: &mut Matrix, floor: f64) -> Vec<f64> {
    let (d, p) = (q.rows(), q.cols());
    let mut cols: Vec<Vec<f64>> = (0..p).map(|j| q.column(j)).collect();
    let mut diag = Vec::with_capacity(p);
    for j in 0..p {
        for _ in 0..2 {
            for i in 0..j {
                if diag[i] == 0.0 {
                    continue;
                }
                let (head, tail) = cols.split_at_mut(j);
                let proj: f64 = head[i].iter().zip(&tail[0]).map(|(a, b)| a * b).sum();
                for (x, y) in tail[0].iter_mut().zip(&head[i]) {
                    *x -= proj * y;
                }
            }
        }
        let r = norm(&cols[j]);
        if r <= floor {
            cols[j].iter_mut().for_each(|x| *x = 0.0);
            diag.push(0.0);
        } else {
            cols[j].iter_mut().for_each(|x| *x /= r);
            diag.push(r);
        }
    }
    for (j, col) in cols.iter().enumerate() {
        for i in 0..d {
            q.set(i, j, col[i]);
        }
    }
    diag
}

/// One QR trajectory: `steps` yields each step's matrix with its 2-norm.
/// Returns `p` exponents sorted non-increasingly.
pub(crate) fn qr_trajectory<'a>(
    frame: Matrix,
    steps: impl Iterator<Item = (&'a Matrix, f64)>,
    n: usize,
    rank_tol: f64,
) -> Vec<f64> {
    let p = frame.cols();
    let burn = burn_in(n);
    let mut q = frame;
    let mut sums = vec![0.0; p];
    let mut alive = p;
    for (t, (a, a_norm)) in steps.enumerate() {
        if alive == 0 {
            break;
        }
        let mut z = a.matmul(&q);
        let diag = orthonormalize(&mut z, rank_tol * a_norm);
        if let Some(dead) = diag.iter().position(|r| *r == 0.0) {
            alive = dead;
            z = z.leading_columns(alive.max(1));
        }
        if t >= burn {
            for j in 0..alive {
                sums[j] += diag[j].ln();
            }
        }
        q = z;
    }
    let span = (n - burn) as f64;
    let mut out: Vec<f64> = (0..p)
        .map(|j| if j < alive { sums[j] / span } else { f64::NEG_INFINITY })
        .collect();
    out.sort_by(|a, b| b.partial_cmp(a).unwrap());
    out
}

pub(crate) fn spectrum_samples(
    c: &Cocycle,
    i_max: usize,
    p: &McParams,
    rank_tol: f64,
) -> Result<Vec<Vec<f64>>> {
    p.check()?;
    if i_max == 0 || i_max > c.dim() {
        return Err(Error::Domain(format!("i_max = {i_max} outside 1..={}", c.dim())));
    }
    let sampler = SymbolSampler::new(c.probs())?;
    let norms: Vec<f64> = c.matrices().iter().map(Matrix::norm2).collect();
    Ok(par_samples(p.samples, |i| {
        let w = sampler.word(p.n, p.seed, i);
        let frame = random_frame(c.dim(), i_max, &mut Stream::new(p.seed, Purpose::Frame, i));
        let steps = w.symbols().iter().map(|&s| (c.matrix(s), norms[s]));
        qr_trajectory(frame, steps, p.n, rank_tol)
    }))
}

/// First `i_max` exponents by QR deflation.
pub fn spectrum_qr(c: &Cocycle, i_max: usize, p: &McParams) -> Result<LyapunovEstimate> {
    spectrum_qr_with_tol(c, i_max, p, DEFAULT_RANK_TOL)
}

pub fn spectrum_qr_with_tol(
    c: &Cocycle,
    i_max: usize,
    p: &McParams,
    rank_tol: f64,
) -> Result<LyapunovEstimate> {
    let rows = spectrum_samples(c, i_max, p, rank_tol)?;
    Ok(LyapunovEstimate::from_samples(&rows, p.n))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExteriorConsistency {
    pub k: usize,
    /// Top exponent of `∧_k A`.
    #[serde(with = "crate::extreal")]
    pub exterior_top: f64,
    pub exterior_stderr: f64,
    /// `L̂_1 + ⋯ + L̂_k` from QR deflation.
    #[serde(with = "crate::extreal")]
    pub partial_sum: f64,
    pub partial_sum_stderr: f64,
    pub residual: f64,
    pub combined_stderr: f64,
}

fn sum_estimate(xs: &[f64]) -> (f64, f64) {
    if xs.iter().any(|x| *x == f64::NEG_INFINITY) {
        (f64::NEG_INFINITY, 0.0)
    } else {
        mean_stderr(xs)
    }
}

/// `|L̂_1(∧_k A) − (L̂_1 + ⋯ + L̂_k)(A)|`, zero when both sides are `-∞`.
pub fn exterior_consistency(c: &Cocycle, k: usize, p: &McParams) -> Result<ExteriorConsistency> {
    if k == 0 || k > c.dim() {
        return Err(Error::Domain(format!("k = {k} outside 1..={}", c.dim())));
    }
    if binomial(c.dim(), k) > MAX_EXTERIOR_DIM {
        return Err(Error::Size(format!("C({},{k}) exceeds {MAX_EXTERIOR_DIM}", c.dim())));
    }
    let ext = exterior_cocycle(c, k, DEFAULT_RANK_TOL)?;
    let top = top_exponent_samples(&ext, p)?;
    let rows = spectrum_samples(c, k, p, DEFAULT_RANK_TOL)?;
    let sums: Vec<f64> = rows
        .iter()
        .map(|r| if r.contains(&f64::NEG_INFINITY) { f64::NEG_INFINITY } else { pairwise_sum(r) })
        .collect();
    let (lhs, lhs_se) = sum_estimate(&top);
    let (rhs, rhs_se) = sum_estimate(&sums);
    let residual = match (lhs == f64::NEG_INFINITY, rhs == f64::NEG_INFINITY) {
        (true, true) => 0.0,
        (false, false) => (lhs - rhs).abs(),
        _ => f64::INFINITY,
    };
    Ok(ExteriorConsistency {
        k,
        exterior_top: lhs,
        exterior_stderr: lhs_se,
        partial_sum: rhs,
        partial_sum_stderr: rhs_se,
        residual,
        combined_stderr: lhs_se.hypot(rhs_se),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalues;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn rotation(a: f64) -> Matrix {
        m(&[&[a.cos(), -a.sin()], &[a.sin(), a.cos()]])
    }

    #[test]
    fn burn_in_rule() {
        assert_eq!(burn_in(1), 0);
        assert_eq!(burn_in(2), 1);
        assert_eq!(burn_in(100), 10);
        assert_eq!(burn_in(101), 11);
    }

    #[test]
    fn rotations_have_zero_exponent() {
        let c = Cocycle::uniform(vec![rotation(0.3), rotation(1.7)]).unwrap();
        let est = top_exponent_mc(&c, &McParams::new(500, 20, 1)).unwrap();
        assert!(est.values[0].abs() < 1e-13);
        assert!(est.stderr[0] < 1e-13);
    }

    #[test]
    fn single_diagonal_matrix_top_exponent() {
        let c = Cocycle::new(vec![1.0], vec![Matrix::from_diag(&[2.0, 0.5])]).unwrap();
        let est = top_exponent_mc(&c, &McParams::new(300, 4, 0)).unwrap();
        assert!((est.values[0] - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn right_angle_projection_rotation_vanishes() {
        let c = Cocycle::uniform(vec![m(&[&[1.0, 0.0], &[0.0, 0.0]]), m(&[&[0.0, -1.0], &[1.0, 0.0]])])
            .unwrap();
        let est = top_exponent_mc(&c, &McParams::new(50, 64, 3)).unwrap();
        assert_eq!(est.values[0], f64::NEG_INFINITY);
        assert!(est.zero_product_fraction > 0.0);
        assert_eq!(est.stderr[0], 0.0);
    }

    #[test]
    fn diagonal_spectrum() {
        let c = Cocycle::new(vec![1.0], vec![Matrix::from_diag(&[3.0, 2.0, 1.0])]).unwrap();
        let est = spectrum_qr(&c, 3, &McParams::new(400, 3, 5)).unwrap();
        let expect = [3f64.ln(), 2f64.ln(), 0.0];
        for (v, e) in est.values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-10, "{v} vs {e}");
        }
    }

    #[test]
    fn rank_barrier_gives_neg_inf() {
        let u1 = m(&[&[1.0, 0.3], &[-0.4, 1.0], &[0.7, 0.2]]);
        let v1 = m(&[&[0.5, 1.0, -0.2], &[0.1, 0.3, 1.2]]);
        let u2 = m(&[&[0.2, 1.1], &[1.0, -0.5], &[0.3, 0.4]]);
        let v2 = m(&[&[1.0, 0.2, 0.6], &[-0.3, 0.9, 0.1]]);
        let (a, b) = (u1.matmul(&v1), u2.matmul(&v2));
        let c = Cocycle::uniform(vec![a, b]).unwrap();
        assert!(crate::cocycle::theta_k(&c, 2).unwrap() > 1e-3);
        let est = spectrum_qr(&c, 3, &McParams::new(200, 16, 2)).unwrap();
        assert!(est.values[1].is_finite());
        assert_eq!(est.values[2], f64::NEG_INFINITY);
        assert_eq!(est.neg_inf_fraction[2], 1.0);
    }

    #[test]
    fn single_matrix_matches_eigenvalue_moduli() {
        let a = m(&[&[1.2, 0.4, -0.3], &[0.1, 0.7, 0.5], &[0.2, -0.6, 0.9]]);
        let c = Cocycle::new(vec![1.0], vec![a.clone()]).unwrap();
        let est = spectrum_qr(&c, 3, &McParams::new(3000, 8, 7)).unwrap();
        let mut logs: Vec<f64> = eigenvalues(&a).iter().map(|(r, i)| r.hypot(*i).ln()).collect();
        logs.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for j in 0..3 {
            // a deterministic cocycle has O(1/n) bias and near-zero spread
            let tol = (3.0 * est.stderr[j]).max(5e-3);
            assert!((est.values[j] - logs[j]).abs() <= tol, "{j}: {} vs {}", est.values[j], logs[j]);
        }
    }

    #[test]
    fn per_sample_rows_are_sorted() {
        let c = Cocycle::uniform(vec![
            m(&[&[0.2, 1.0, 0.0], &[1.0, 0.1, 0.3], &[0.0, 0.4, 2.0]]),
            m(&[&[1.0, 0.0, 0.5], &[0.3, 0.9, 0.0], &[0.0, 1.1, 0.2]]),
        ])
        .unwrap();
        for row in spectrum_samples(&c, 3, &McParams::new(30, 50, 9), DEFAULT_RANK_TOL).unwrap() {
            assert!(row.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn exterior_consistency_examples() {
        let rot = Cocycle::uniform(vec![rotation(0.4), rotation(2.0)]).unwrap();
        let r = exterior_consistency(&rot, 2, &McParams::new(200, 10, 1)).unwrap();
        assert!(r.residual < 1e-12);

        let rank1 = Cocycle::uniform(vec![
            Matrix::outer(&[1.0, 0.5], &[0.3, 1.0]),
            Matrix::outer(&[-0.2, 1.0], &[1.0, 0.4]),
        ])
        .unwrap();
        let r = exterior_consistency(&rank1, 2, &McParams::new(100, 10, 1)).unwrap();
        assert_eq!(r.exterior_top, f64::NEG_INFINITY);
        assert_eq!(r.partial_sum, f64::NEG_INFINITY);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn estimate_round_trips_through_json() {
        let est = LyapunovEstimate::from_samples(&[vec![0.5, f64::NEG_INFINITY]], 10);
        let s = serde_json::to_string(&est).unwrap();
        assert_eq!(serde_json::from_str::<LyapunovEstimate>(&s).unwrap(), est);
    }
}
