//! Span certificate for a generic family and a reducing witness for a
//! family that preserves a coordinate line.

use cocyclab::cocycle::Cocycle;
use cocyclab::irreducibility::{certify_irreducible, verify_witness, SampleParams};
use cocyclab::linalg::{Matrix, DEFAULT_RANK_TOL};
use cocyclab::reduction::reduce;

fn report(name: &str, c: &Cocycle, k: usize) -> cocyclab::Result<()> {
    let r = reduce(c, k, DEFAULT_RANK_TOL)?;
    let p = SampleParams { seed: 3, ..SampleParams::default() };
    for i in 1..k {
        let v = certify_irreducible(c, &r, i, &p)?;
        println!("{name}, power {i}: {:?}, span {}/{}", v.status, v.span_dim, v.full_dim);
        if let Some(w) = &v.witness {
            let (red, orig) = verify_witness(c, &r, i, w)?;
            println!("  witness dims {:?}, residuals {red:.1e} / {orig:.1e}", w.dims);
        }
    }
    Ok(())
}

fn main() -> cocyclab::Result<()> {
    let generic = Cocycle::uniform(vec![
        Matrix::from_rows(&[vec![1.0, 0.4, 0.0], vec![-0.3, 0.8, 0.0], vec![0.2, 0.5, 0.0]])?,
        Matrix::from_rows(&[vec![0.6, 0.0, 1.0], vec![0.0, 0.0, -0.7], vec![0.9, 0.0, 0.1]])?,
    ])?;
    report("generic", &generic, 2)?;

    // Both matrices keep the first two coordinates and are upper triangular there.
    let triangular = Cocycle::uniform(vec![
        Matrix::from_rows(&[vec![1.0, 0.5, 0.0], vec![0.0, 0.8, 0.0], vec![0.0, 0.0, 0.0]])?,
        Matrix::from_rows(&[vec![-0.7, 1.0, 0.0], vec![0.0, 1.3, 0.0], vec![0.0, 0.0, 0.0]])?,
    ])?;
    report("triangular", &triangular, 2)
}
