//! Compound matrices: multiplicativity and the singular-value identity.

use cocyclab::linalg::{binomial, exterior_power, singular_values, Matrix};

fn main() -> cocyclab::Result<()> {
    let a = Matrix::from_rows(&[vec![2.0, 1.0, 0.0], vec![0.0, 1.0, -1.0], vec![1.0, 0.0, 3.0]])?;
    let b = Matrix::from_rows(&[vec![1.0, 0.5, 0.0], vec![-1.0, 2.0, 0.0], vec![0.0, 0.0, 0.5]])?;
    let s = singular_values(&a);
    println!("singular values of A: {s:.6?}");
    for k in 1..=3 {
        let ak = exterior_power(&a, k)?;
        let lhs = exterior_power(&a.matmul(&b), k)?;
        let rhs = ak.matmul(&exterior_power(&b, k)?);
        let top: f64 = s[..k].iter().product();
        println!(
            "k={k}: {}x{} compound, |A^k(AB) - A^k(A) A^k(B)| = {:.1e}, |A^k(A)| = {:.6} vs s_1..s_k = {top:.6}",
            binomial(3, k),
            binomial(3, k),
            (&lhs - &rhs).norm2(),
            ak.norm2(),
        );
    }
    Ok(())
}
