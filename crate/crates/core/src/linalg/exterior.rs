use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Largest compound-matrix side accepted by [`exterior_power`].
pub const MAX_EXTERIOR_DIM: usize = 256;

/// A strictly increasing set of 0-based indices, one row/column label of a
/// compound matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(members: Vec<usize>, d: usize) -> Result<Self> {
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(format!("index set {members:?} is not strictly increasing")));
        }
        if members.last().is_some_and(|&x| x >= d) {
            return Err(Error::Domain(format!("index set {members:?} exceeds dimension {d}")));
        }
        Ok(Self(members))
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `{0, …, d-1}` in lexicographic order.
pub fn index_sets(d: usize, k: usize) -> Vec<IndexSet> {
    let mut out = Vec::with_capacity(binomial(d, k));
    if k > d {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(IndexSet(cur.clone()));
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < d - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Determinant by LU with partial pivoting. Exact zero pivots give 0.
pub fn determinant(a: &Matrix) -> f64 {
    assert!(a.is_square(), "determinant of non-square matrix");
    let n = a.rows();
    let mut m = a.as_slice().to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i * n + col].abs().partial_cmp(&m[j * n + col].abs()).unwrap())
            .unwrap();
        let p = m[pivot * n + col];
        if p == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..n {
                m.swap(col * n + j, pivot * n + j);
            }
            det = -det;
        }
        det *= p;
        for i in col + 1..n {
            let f = m[i * n + col] / p;
            if f == 0.0 {
                continue;
            }
            for j in col + 1..n {
                m[i * n + j] -= f * m[col * n + j];
            }
        }
    }
    det
}

/// Inverse by Gauss–Jordan elimination with partial pivoting; `None` when a
/// pivot vanishes exactly.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    assert!(a.is_square(), "inverse of non-square matrix");
    let n = a.rows();
    let mut m = a.as_slice().to_vec();
    let mut inv = Matrix::identity(n).into_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i * n + col].abs().partial_cmp(&m[j * n + col].abs()).unwrap())
            .unwrap();
        let p = m[pivot * n + col];
        if p == 0.0 {
            return None;
        }
        for j in 0..n {
            m.swap(col * n + j, pivot * n + j);
            inv.swap(col * n + j, pivot * n + j);
        }
        for j in 0..n {
            m[col * n + j] /= p;
            inv[col * n + j] /= p;
        }
        for i in 0..n {
            let f = m[i * n + col];
            if i == col || f == 0.0 {
                continue;
            }
            for j in 0..n {
                m[i * n + j] -= f * m[col * n + j];
                inv[i * n + j] -= f * inv[col * n + j];
            }
        }
    }
    Matrix::from_row_major(n, n, inv).ok()
}

/// The `k`-th compound matrix `∧_k A`: entry `(I, J)` is the minor
/// `det A[I, J]`, with index sets in lexicographic order.
pub fn exterior_power(a: &Matrix, k: usize) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "exterior power of non-square {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let d = a.rows();
    if k == 0 || k > d {
        return Err(Error::Domain(format!("exterior power order {k} outside 1..={d}")));
    }
    let n = binomial(d, k);
    if n > MAX_EXTERIOR_DIM {
        return Err(Error::Size(format!(
            "C({d},{k}) = {n} exceeds the limit of {MAX_EXTERIOR_DIM}"
        )));
    }
    let sets = index_sets(d, k);
    let mut out = Matrix::zeros(n, n);
    for (r, rows) in sets.iter().enumerate() {
        for (c, cols) in sets.iter().enumerate() {
            out.set(r, c, determinant(&a.select(rows.members(), cols.members())));
        }
    }
    Ok(out)
}

/// `∧_k` applied to a rectangular `d×k'` matrix with orthonormal columns
/// (or any rectangular matrix): rows indexed by `k`-subsets of the rows,
/// columns by `k`-subsets of the columns.
pub fn exterior_power_rect(a: &Matrix, k: usize) -> Result<Matrix> {
    let (r, c) = (a.rows(), a.cols());
    if k == 0 || k > r.min(c) {
        return Err(Error::Domain(format!(
            "exterior power order {k} outside 1..={}",
            r.min(c)
        )));
    }
    let (nr, nc) = (binomial(r, k), binomial(c, k));
    if nr > MAX_EXTERIOR_DIM || nc > MAX_EXTERIOR_DIM {
        return Err(Error::Size(format!("compound shape {nr}x{nc} too large")));
    }
    let row_sets = index_sets(r, k);
    let col_sets = index_sets(c, k);
    let mut out = Matrix::zeros(nr, nc);
    for (i, rs) in row_sets.iter().enumerate() {
        for (j, cs) in col_sets.iter().enumerate() {
            out.set(i, j, determinant(&a.select(rs.members(), cs.members())));
        }
    }
    Ok(out)
}
