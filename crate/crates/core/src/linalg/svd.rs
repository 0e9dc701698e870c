//! One-sided (Hestenes) Jacobi SVD and the rank / range / kernel helpers
//! built on it.
//!
//! Jacobi rotations keep high relative accuracy on small singular values,
//! which matters for the rank decisions made throughout the crate.

use super::matrix::{dot, norm, Matrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Thin singular value decomposition `A = U diag(s) Vᵗ`.
///
/// For an `r×c` input, `u` is `r×c`, `s` has `c` entries sorted descending
/// and `v` is `c×c` orthogonal. Wide inputs are padded with zero rows, so the
/// trailing `c - r` singular values are zero and `v` still spans the kernel.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

pub fn svd(a: &Matrix) -> Svd {
    let (r, c) = (a.rows(), a.cols());
    let work_rows = r.max(c);
    // Column-major working copy.
    let mut w: Vec<Vec<f64>> = (0..c)
        .map(|j| {
            let mut col = a.column(j);
            col.resize(work_rows, 0.0);
            col
        })
        .collect();
    let mut v: Vec<Vec<f64>> = (0..c)
        .map(|j| {
            let mut e = vec![0.0; c];
            e[j] = 1.0;
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..c {
            for q in (p + 1)..c {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate(&mut w, p, q, cs, sn);
                rotate(&mut v, p, q, cs, sn);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = w.iter().map(|col| norm(col)).collect();
    let mut order: Vec<usize> = (0..c).collect();
    // Stable: equal singular values keep their column order.
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut u = Matrix::zeros(r, c);
    let mut vm = Matrix::zeros(c, c);
    let mut s = Vec::with_capacity(c);
    for (jj, &j) in order.iter().enumerate() {
        let sj = norms[j];
        s.push(sj);
        if sj > 0.0 {
            for i in 0..r {
                u.set(i, jj, w[j][i] / sj);
            }
        }
        for i in 0..c {
            vm.set(i, jj, v[j][i]);
        }
    }
    Svd { u, s, v: vm }
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, cs: f64, sn: f64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = cs * a - sn * b;
        *y = sn * a + cs * b;
    }
}

/// Singular values in descending order; `min(rows, cols)` of them.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    let mut s = svd(a).s;
    s.truncate(a.rows().min(a.cols()));
    s
}

/// Number of singular values above `tol · s₁`. The zero matrix has rank 0.
pub fn numeric_rank(a: &Matrix, tol: f64) -> usize {
    rank_of_values(&singular_values(a), tol)
}

pub(crate) fn rank_of_values(s: &[f64], tol: f64) -> usize {
    let s1 = s.first().copied().unwrap_or(0.0);
    if s1 == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > tol * s1).count()
}

/// Flip column signs so each column's largest-magnitude entry is positive
/// (ties resolved toward the lowest row index).
pub fn canonical_signs(m: &mut Matrix) {
    for j in 0..m.cols() {
        let mut best = 0;
        for i in 1..m.rows() {
            if m.get(i, j).abs() > m.get(best, j).abs() {
                best = i;
            }
        }
        if m.get(best, j) < 0.0 {
            for i in 0..m.rows() {
                m.set(i, j, -m.get(i, j));
            }
        }
    }
}

/// Orthonormal basis (`d×k`) of the span of the top-`k` left singular
/// vectors of `a`, with the canonical sign convention.
pub fn orthonormal_range_basis(a: &Matrix, k: usize, tol: f64) -> Result<Matrix> {
    let dec = svd(a);
    let rank = rank_of_values(&dec.s[..a.rows().min(a.cols())], tol);
    if rank != k {
        return Err(Error::Precondition(format!(
            "range basis requested for rank {k}, observed numeric rank {rank}"
        )));
    }
    if k == 0 {
        return Err(Error::Domain("rank-0 matrix has no range basis".into()));
    }
    let mut m = dec.u.leading_columns(k);
    canonical_signs(&mut m);
    Ok(m)
}

/// Orthonormal basis of the numerical kernel, as columns. `None` when the
/// kernel is trivial.
pub fn null_space(a: &Matrix, tol: f64) -> Option<Matrix> {
    let dec = svd(a);
    let rank = rank_of_values(&dec.s, tol);
    let c = a.cols();
    if rank == c {
        return None;
    }
    let rows: Vec<usize> = (0..c).collect();
    let cols: Vec<usize> = (rank..c).collect();
    Some(dec.v.select(&rows, &cols))
}

/// Orthonormal basis of the span of the columns of `a` (rank at `tol`).
pub fn column_span(a: &Matrix, tol: f64) -> Option<Matrix> {
    let dec = svd(a);
    let rank = rank_of_values(&dec.s[..a.rows().min(a.cols())], tol);
    (rank > 0).then(|| dec.u.leading_columns(rank))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_values_of_diagonal_and_rotation() {
        let d = Matrix::from_diag(&[3.0, -2.0]);
        assert_eq!(singular_values(&d), vec![3.0, 2.0]);
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let r = Matrix::from_rows(&[vec![c, -s], vec![s, c]]).unwrap();
        for x in singular_values(&r) {
            assert!((x - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn numeric_rank_examples() {
        assert_eq!(numeric_rank(&Matrix::zeros(3, 3), 1e-9), 0);
        let p = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(numeric_rank(&p, 1e-9), 1);
        assert_eq!(numeric_rank(&Matrix::from_diag(&[1.0, 1e-14]), 1e-8), 1);
    }

    #[test]
    fn range_basis_of_projection_is_first_axis() {
        let p = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let m = orthonormal_range_basis(&p, 1, 1e-9).unwrap();
        assert_eq!(m.to_rows(), vec![vec![1.0], vec![0.0]]);
        let err = orthonormal_range_basis(&p, 2, 1e-9).unwrap_err();
        assert!(err.to_string().contains("observed numeric rank 1"));
    }

    #[test]
    fn range_basis_of_rank_one_matrix() {
        let u = [1.0, -3.0, 2.0];
        let v = [0.5, 1.0, 0.0];
        let a = Matrix::outer(&u, &v);
        let m = orthonormal_range_basis(&a, 1, 1e-9).unwrap();
        // largest |entry| of u sits in row 1 and must come out positive
        let r14 = 14f64.sqrt();
        let expect = [-1.0 / r14, 3.0 / r14, -2.0 / r14];
        for i in 0..3 {
            assert!((m.get(i, 0) - expect[i]).abs() < 1e-14);
        }
        // |Mᵗ A| = |u| |v|
        let mta = &m.transpose() * &a;
        assert!((mta.frobenius_norm() - r14 * 1.25f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0, 0.0]]).unwrap();
        let n = null_space(&a, 1e-12).unwrap();
        assert_eq!(n.cols(), 2);
        let an = &a * &n;
        assert!(an.max_abs() < 1e-15);
    }
}
