//! Dense small-matrix kernels: compound matrices, Jacobi SVD, numerical
//! rank, range and kernel bases, eigenvalues.

mod eigen;
mod exterior;
mod matrix;
mod svd;

pub use eigen::{eigenvalues, symmetric_eigenvalues};
pub use exterior::{
    binomial, determinant, exterior_power, exterior_power_rect, index_sets, inverse, IndexSet,
    MAX_EXTERIOR_DIM,
};
pub use matrix::{dot, norm, Matrix};
pub use svd::{
    canonical_signs, column_span, null_space, numeric_rank, orthonormal_range_basis,
    singular_values, svd, Svd,
};

/// Default relative tolerance for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
