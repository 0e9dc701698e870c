//! Random families shared by the integration and acceptance suites.
#![allow(dead_code)]

use cocyclab::cocycle::Cocycle;
use cocyclab::linalg::Matrix;
use cocyclab::rng::{Purpose, Stream};

pub fn stream(tag: u64, index: u64) -> Stream {
    Stream::new(2024, Purpose::Custom(tag), index)
}

pub fn gaussian(rows: usize, cols: usize, s: &mut Stream) -> Matrix {
    Matrix::from_row_major(rows, cols, (0..rows * cols).map(|_| s.normal()).collect()).unwrap()
}

pub fn gaussian_vec(n: usize, s: &mut Stream) -> Vec<f64> {
    (0..n).map(|_| s.normal()).collect()
}

/// Probability vector with entries bounded away from zero.
pub fn probs(m: usize, s: &mut Stream) -> Vec<f64> {
    let w: Vec<f64> = (0..m).map(|_| 0.5 + s.uniform()).collect();
    let t: f64 = w.iter().sum();
    let mut p: Vec<f64> = w.iter().map(|x| x / t).collect();
    let head: f64 = p[..m - 1].iter().sum();
    p[m - 1] = 1.0 - head;
    p
}

/// `A_i = U_i V_iᵗ` with Gaussian `d×k` factors.
pub fn constant_rank(d: usize, k: usize, m: usize, s: &mut Stream) -> Cocycle {
    let mats = (0..m).map(|_| gaussian(d, k, s).matmul(&gaussian(k, d, s)).scaled(1.0 / d as f64)).collect();
    Cocycle::new(probs(m, s), mats).unwrap()
}

/// Two-symbol rank-one family `A_i = u_i v_iᵗ`.
pub fn rank_one_pair(d: usize, s: &mut Stream) -> Cocycle {
    let mats = (0..2).map(|_| Matrix::outer(&gaussian_vec(d, s), &gaussian_vec(d, s))).collect();
    Cocycle::new(probs(2, s), mats).unwrap()
}

/// Rank-`k` family with `A_i V_j = V_i` for `V_i = R⁻¹K_i span(e_1..e_s)`:
/// `A_i = R⁻¹ K_i D_i R`, `D_i = blockdiag(T_i, 0)` with `T_i` block upper
/// triangular and `K_i` mapping `span(e_1..e_s)` into itself plus the kernel
/// coordinates.
pub fn block_reducible(d: usize, k: usize, sdim: usize, m: usize, s: &mut Stream) -> Cocycle {
    let r = gaussian(d, d, s);
    let r_inv = cocyclab::linalg::inverse(&r).unwrap();
    let mats = (0..m)
        .map(|_| {
            let mut t = gaussian(d, d, s);
            let mut kk = gaussian(d, d, s);
            for row in 0..d {
                for col in 0..d {
                    if row >= k || col >= k || (row >= sdim && col < sdim) {
                        t.set(row, col, 0.0);
                    }
                    if row >= sdim && row < k && col < sdim {
                        kk.set(row, col, 0.0);
                    }
                }
            }
            r_inv.matmul(&kk).matmul(&t).matmul(&r)
        })
        .collect();
    Cocycle::new(probs(m, s), mats).unwrap()
}

/// Θ₁ = 0: `A_1 A_0 = 0` and `A_0 A_1 = 0`.
pub fn orthogonal_rank_one(d: usize) -> Cocycle {
    let mut e0 = vec![0.0; d];
    let mut e1 = vec![0.0; d];
    e0[0] = 1.0;
    e1[1] = 1.0;
    Cocycle::uniform(vec![Matrix::outer(&e0, &e0), Matrix::outer(&e1, &e1)]).unwrap()
}

/// Rank-`k` family where `A_0 A_1` loses rank: one column of `V_0` is
/// orthogonal to `Range(A_1)`.
pub fn theta_vanishing(d: usize, k: usize, s: &mut Stream) -> Cocycle {
    let u1 = gaussian(d, k, s);
    let v1 = gaussian(d, k, s);
    let a1 = u1.matmul(&v1.transpose());
    let basis = cocyclab::linalg::orthonormal_range_basis(&a1, k, 1e-9).unwrap();
    let u0 = gaussian(d, k, s);
    let mut v0 = gaussian(d, k, s);
    // project the first column of V_0 off Range(A_1)
    let col = v0.column(0);
    let coef = basis.transpose().matvec(&col);
    let proj = basis.matvec(&coef);
    for r in 0..d {
        v0.set(r, 0, col[r] - proj[r]);
    }
    let a0 = u0.matmul(&v0.transpose());
    Cocycle::uniform(vec![a0, a1]).unwrap()
}
