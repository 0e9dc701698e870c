//! Irreducibility of `∧_i A` through the return-word groups.
//!
//! For a base symbol `l` the automorphisms `A_l A_{i_1} ⋯ A_{i_n}|_{R_l}`
//! read, in the coordinates `M_l`, as `C_{l,i_1} C_{i_1,i_2} ⋯ C_{i_n,l}`.
//! If the linear span of a sample of these elements (and their products)
//! after applying `∧_i` is all of `Mat(N)`, `N = C(k,i)`, no proper subspace
//! is invariant and the cocycle is certified irreducible. Only elements with
//! condition number below `MAX_CONDITION` enter the span, since rounding in
//! the others can fake extra directions. Otherwise an eigen-direction of a
//! sampled element is grown into the smallest family `(W_j)` invariant under
//! the single transitions, and accepted only if the family passes a direct
//! equivariance check.

use serde::{Deserialize, Serialize};

use crate::cocycle::Cocycle;
use crate::error::{Error, Result};
use crate::linalg::{
    binomial, eigenvalues, exterior_power, exterior_power_rect, inverse, norm, singular_values, svd, Matrix,
};
use crate::reduction::ReducedCocycle;
use crate::rng::{Purpose, Stream};

/// Relative tolerance for accepting a new direction in a span.
pub const SPAN_TOL: f64 = 1e-9;
/// Relative tolerance for growing an invariant-subspace candidate.
pub const ORBIT_TOL: f64 = 1e-7;
/// Accepted equivariance residual of a witness family.
pub const WITNESS_TOL: f64 = 1e-8;
/// Group elements with larger condition number are left out of span and
/// orbit computations.
pub const MAX_CONDITION: f64 = 1e6;
/// Return words whose eigen-directions seed the witness search.
pub const SEED_ELEMENTS: usize = 8;
/// Largest `C(k,i)²` accepted.
pub const MAX_ALGEBRA_DIM: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSample {
    pub base: usize,
    /// `elements[2t]` is the return word `words[t]`, `elements[2t+1]` its inverse.
    pub elements: Vec<Matrix>,
    /// Inner symbols `i_1 … i_n` of each return word.
    pub words: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleParams {
    /// Number of return words (each contributes itself and its inverse).
    pub budget: usize,
    /// Cap on the inner length of random words.
    pub max_len: usize,
    pub seed: u64,
}

impl Default for SampleParams {
    fn default() -> Self {
        Self { budget: 64, max_len: 8, seed: 0 }
    }
}

/// `C_{l,i_1} C_{i_1,i_2} ⋯ C_{i_n,l}`.
pub fn return_element(r: &ReducedCocycle, l: usize, inner: &[usize]) -> Matrix {
    let mut path = Vec::with_capacity(inner.len() + 2);
    path.push(l);
    path.extend_from_slice(inner);
    path.push(l);
    path.windows(2)
        .fold(Matrix::identity(r.k), |acc, w| acc.matmul(r.transition(w[0], w[1])))
}

fn short_words(m: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let next: Vec<Vec<usize>> = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..m).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// All return words with at most 3 inner symbols, then random words with
/// geometric inner length (mean 2) capped at `max_len`, up to `budget`.
pub fn return_words(r: &ReducedCocycle, l: usize, p: &SampleParams) -> Result<GroupSample> {
    if p.budget == 0 {
        return Err(Error::Domain("return-word budget must be at least 1".into()));
    }
    if l >= r.symbols() {
        return Err(Error::Domain(format!("base symbol {l} outside alphabet")));
    }
    let m = r.symbols();
    let mut words: Vec<Vec<usize>> = short_words(m, 3).into_iter().take(p.budget).collect();
    let mut index = 0u64;
    while words.len() < p.budget {
        let mut s = Stream::new(p.seed, Purpose::ReturnWord, index);
        index += 1;
        let mut len = 1;
        while len < p.max_len.max(1) && s.uniform() < 0.5 {
            len += 1;
        }
        words.push((0..len).map(|_| s.below(m)).collect());
    }
    let mut elements = Vec::with_capacity(2 * words.len());
    let mut kept = Vec::with_capacity(words.len());
    for w in words {
        let g = return_element(r, l, &w);
        let Some(gi) = inverse(&g) else { continue };
        if g.is_finite() && gi.is_finite() {
            elements.push(g);
            elements.push(gi);
            kept.push(w);
        }
    }
    Ok(GroupSample { base: l, elements, words: kept })
}

/// Incrementally grown orthonormal basis of a subspace of `ℝ^dim`.
struct SpanBasis {
    dim: usize,
    vectors: Vec<Vec<f64>>,
    tol: f64,
}

impl SpanBasis {
    fn new(dim: usize, tol: f64) -> Self {
        Self { dim, vectors: Vec::new(), tol }
    }

    fn len(&self) -> usize {
        self.vectors.len()
    }

    fn full(&self) -> bool {
        self.vectors.len() == self.dim
    }

    /// Adds the direction of `v` if its distance to the current span exceeds
    /// `tol · scale`.
    fn push(&mut self, v: &[f64], scale: f64) -> bool {
        if self.full() || norm(v) == 0.0 {
            return false;
        }
        let mut r = v.to_vec();
        for _ in 0..2 {
            for b in &self.vectors {
                let c: f64 = b.iter().zip(&r).map(|(x, y)| x * y).sum();
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let nr = norm(&r);
        if nr <= self.tol * scale {
            return false;
        }
        r.iter_mut().for_each(|x| *x /= nr);
        self.vectors.push(r);
        true
    }

    fn as_columns(&self) -> Matrix {
        Matrix::from_columns(&self.vectors).expect("finite basis")
    }
}

fn normalized(a: &Matrix) -> Matrix {
    a.scaled(1.0 / a.frobenius_norm())
}

/// Elements with condition number at most `MAX_CONDITION`, scaled to unit
/// Frobenius norm. Rounding in the others can exceed the span tolerance.
pub fn well_conditioned(elements: &[Matrix]) -> Vec<Matrix> {
    elements
        .iter()
        .filter(|g| {
            let s = singular_values(g);
            s.last().is_some_and(|&lo| lo > 0.0 && s[0] <= MAX_CONDITION * lo)
        })
        .map(normalized)
        .collect()
}

/// Dimension of the span of the elements and their pairwise products in
/// `Mat(N)`. Elements are normalized; a direction counts when it is at
/// distance more than `tol` from the span, products included unnormalized.
pub fn span_dim_of(elements: &[Matrix], tol: f64) -> usize {
    let Some(first) = elements.first() else { return 0 };
    let n = first.rows();
    let units: Vec<Matrix> = elements.iter().filter(|g| !g.is_zero()).map(normalized).collect();
    let mut basis = SpanBasis::new(n * n, tol);
    for g in &units {
        basis.push(g.as_slice(), 1.0);
    }
    'outer: for a in &units {
        for b in &units {
            if basis.full() {
                break 'outer;
            }
            basis.push(a.matmul(b).as_slice(), 1.0);
        }
    }
    basis.len()
}

pub fn algebra_span_dim(g: &GroupSample) -> usize {
    span_dim_of(&well_conditioned(&g.elements), SPAN_TOL)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    CertifiedIrreducible,
    ReducibleWitness,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// `dim W_j`, equal for all symbols.
    pub dims: Vec<usize>,
    /// Orthonormal bases of `W_j ⊂ ∧_i ℝ^k`.
    pub bases: Vec<Matrix>,
    /// `(∧_i M_j) W_j ⊂ ∧_i ℝ^d`.
    pub original_bases: Vec<Matrix>,
    /// `max_{j,l} ‖(I − Q_jQ_jᵗ)(∧_iC_{j,l})Q_l‖ / ‖∧_iC_{j,l}‖`.
    pub residual: f64,
    /// The same check with `∧_i A_j` on the original bases.
    pub original_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrreducibilityVerdict {
    pub power: usize,
    pub status: Status,
    pub span_dim: usize,
    /// `C(k,i)²`.
    pub full_dim: usize,
    pub elements: usize,
    pub witness: Option<Witness>,
}

fn check_power(r: &ReducedCocycle, i: usize) -> Result<usize> {
    if i == 0 || i > r.k {
        return Err(Error::Domain(format!("power {i} outside 1..={}", r.k)));
    }
    let n = binomial(r.k, i);
    if n * n > MAX_ALGEBRA_DIM {
        return Err(Error::Size(format!("C({},{i})² = {} exceeds {MAX_ALGEBRA_DIM}", r.k, n * n)));
    }
    Ok(n)
}

fn exterior_sample(g: &GroupSample, i: usize) -> Result<Vec<Matrix>> {
    g.elements.iter().map(|e| exterior_power(e, i)).collect()
}

/// Span certificate at base symbol 0, falling back to the witness search.
pub fn certify_irreducible(
    c: &Cocycle,
    r: &ReducedCocycle,
    i: usize,
    p: &SampleParams,
) -> Result<IrreducibilityVerdict> {
    let n = check_power(r, i)?;
    let g = return_words(r, 0, p)?;
    let all = exterior_sample(&g, i)?;
    let lifted = well_conditioned(&all);
    let span_dim = span_dim_of(&lifted, SPAN_TOL);
    let mut verdict = IrreducibilityVerdict {
        power: i,
        status: Status::Unknown,
        span_dim,
        full_dim: n * n,
        elements: lifted.len(),
        witness: None,
    };
    if span_dim == n * n {
        verdict.status = Status::CertifiedIrreducible;
    } else if let Some(w) = search_with_sample(c, r, i, &all)? {
        verdict.status = Status::ReducibleWitness;
        verdict.witness = Some(w);
    }
    Ok(verdict)
}

/// Heuristic search for a reducing family of `∧_i` of the reduced cocycle.
/// Returns only families that pass [`verify_witness`].
pub fn search_reducing_family(
    c: &Cocycle,
    r: &ReducedCocycle,
    i: usize,
    p: &SampleParams,
) -> Result<Option<Witness>> {
    check_power(r, i)?;
    let lifted = exterior_sample(&return_words(r, 0, p)?, i)?;
    search_with_sample(c, r, i, &lifted)
}

/// Real invariant directions of `g`: one eigenvector per real eigenvalue and
/// a 2-plane per complex pair.
fn eigen_candidates(g: &Matrix) -> Vec<Matrix> {
    let n = g.rows();
    let scale = g.norm2();
    let mut out = Vec::new();
    for (re, im) in eigenvalues(g) {
        if im.abs() <= 1e-10 * scale {
            let shifted = g - &Matrix::identity(n).scaled(re);
            out.push(smallest_right_vectors(&shifted, 1));
        } else if im > 0.0 {
            let quad = &(&g.matmul(g) - &g.scaled(2.0 * re))
                + &Matrix::identity(n).scaled(re * re + im * im);
            out.push(smallest_right_vectors(&quad, 2));
        }
    }
    out
}

fn smallest_right_vectors(a: &Matrix, count: usize) -> Matrix {
    let dec = svd(a);
    let n = a.cols();
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (n - count..n).collect();
    dec.v.select(&rows, &cols)
}

/// Smallest family `(W_j)` with `start ⊂ W_0` and `D_{j,l} W_l ⊂ W_j` for
/// all `j, l` (at `ORBIT_TOL`); `None` once some `W_j` is everything.
fn family_closure(start: &Matrix, d: &[Vec<Matrix>]) -> Option<Vec<Matrix>> {
    let m = d.len();
    let n = start.rows();
    let mut w: Vec<SpanBasis> = (0..m).map(|_| SpanBasis::new(n, ORBIT_TOL)).collect();
    for j in 0..start.cols() {
        let col = start.column(j);
        w[0].push(&col, norm(&col));
    }
    loop {
        let mut changed = false;
        for l in 0..m {
            let src = w[l].vectors.clone();
            for (j, row) in d.iter().enumerate() {
                for v in &src {
                    changed |= w[j].push(&row[l].matvec(v), 1.0);
                }
                if w[j].full() {
                    return None;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Some(w.iter().map(SpanBasis::as_columns).collect())
}

fn subspace_residual(target: &Matrix, image: &Matrix) -> f64 {
    let proj = target.matmul(&target.transpose().matmul(image));
    (image - &proj).norm2()
}

/// Candidates are eigen-directions of the first sampled elements, each grown
/// to the smallest invariant family under the single transitions `∧_iC_{j,l}`.
fn search_with_sample(
    c: &Cocycle,
    r: &ReducedCocycle,
    i: usize,
    lifted: &[Matrix],
) -> Result<Option<Witness>> {
    let n = binomial(r.k, i);
    if n < 2 {
        return Ok(None);
    }
    let d = r
        .transitions
        .iter()
        .map(|row| row.iter().map(|t| Ok(exterior_power(t, i)?.scaled(1.0 / t.norm2().powi(i as i32)))).collect())
        .collect::<Result<Vec<Vec<Matrix>>>>()?;
    for g in lifted.iter().step_by(2).take(SEED_ELEMENTS) {
        for cand in eigen_candidates(&normalized(g)) {
            let Some(bases) = family_closure(&cand, &d) else { continue };
            if bases.iter().any(|b| b.cols() == 0) {
                continue;
            }
            let witness = build_witness(c, r, i, bases)?;
            if witness.residual <= WITNESS_TOL && witness.original_residual <= WITNESS_TOL {
                return Ok(Some(witness));
            }
        }
    }
    Ok(None)
}

fn build_witness(c: &Cocycle, r: &ReducedCocycle, i: usize, bases: Vec<Matrix>) -> Result<Witness> {
    let original_bases = bases
        .iter()
        .zip(&r.bases)
        .map(|(w, m)| Ok(exterior_power_rect(m, i)?.matmul(w)))
        .collect::<Result<Vec<_>>>()?;
    let mut witness = Witness {
        dims: bases.iter().map(Matrix::cols).collect(),
        bases,
        original_bases,
        residual: f64::INFINITY,
        original_residual: f64::INFINITY,
    };
    let (res, orig) = verify_witness(c, r, i, &witness)?;
    witness.residual = res;
    witness.original_residual = orig;
    Ok(witness)
}

/// Direct equivariance check of a family, in reduced and in original
/// coordinates.
pub fn verify_witness(c: &Cocycle, r: &ReducedCocycle, i: usize, w: &Witness) -> Result<(f64, f64)> {
    let m = r.symbols();
    let n = binomial(r.k, i);
    if w.bases.len() != m || w.original_bases.len() != m {
        return Err(Error::Shape("witness family size differs from the alphabet".into()));
    }
    if w.bases.iter().any(|b| b.cols() == 0 || b.cols() >= n) {
        return Ok((f64::INFINITY, f64::INFINITY));
    }
    let mut reduced: f64 = 0.0;
    let mut original: f64 = 0.0;
    for j in 0..m {
        let a_ext = exterior_power(c.matrix(j), i)?;
        let a_norm = a_ext.norm2();
        for l in 0..m {
            let d = exterior_power(r.transition(j, l), i)?;
            reduced = reduced.max(subspace_residual(&w.bases[j], &d.matmul(&w.bases[l])) / d.norm2());
            let img = a_ext.matmul(&w.original_bases[l]);
            original = original.max(subspace_residual(&w.original_bases[j], &img) / a_norm);
        }
    }
    Ok((reduced, original))
}
