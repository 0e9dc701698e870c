use nalgebra::DMatrix;

use super::matrix::Matrix;

fn to_na(a: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}

/// Eigenvalues of a square matrix as `(re, im)` pairs, sorted by decreasing
/// modulus (ties by decreasing real part, then imaginary part).
pub fn eigenvalues(a: &Matrix) -> Vec<(f64, f64)> {
    assert!(a.is_square(), "eigenvalues of non-square matrix");
    let mut ev: Vec<(f64, f64)> =
        to_na(a).complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
    ev.sort_by(|x, y| {
        let (mx, my) = (x.0.hypot(x.1), y.0.hypot(y.1));
        my.partial_cmp(&mx)
            .unwrap()
            .then(y.0.partial_cmp(&x.0).unwrap())
            .then(y.1.partial_cmp(&x.1).unwrap())
    });
    ev
}

/// Eigenvalues of a symmetric matrix, sorted descending.
pub fn symmetric_eigenvalues(a: &Matrix) -> Vec<f64> {
    let mut ev: Vec<f64> = to_na(a).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
    ev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_has_unit_modulus_pair() {
        let (c, s) = (0.4f64.cos(), 0.4f64.sin());
        let r = Matrix::from_rows(&[vec![c, -s], vec![s, c]]).unwrap();
        let ev = eigenvalues(&r);
        assert_eq!(ev.len(), 2);
        for (re, im) in ev {
            assert!((re.hypot(im) - 1.0).abs() < 1e-14);
            assert!((im.abs() - s).abs() < 1e-14);
        }
    }

    #[test]
    fn symmetric_sorted() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let ev = symmetric_eigenvalues(&a);
        assert!((ev[0] - 3.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }
}
