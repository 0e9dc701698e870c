//! Θ_k decides between a finite exponent and collapse to -∞.

use cocyclab::cocycle::{theta_k, theta_positive, Cocycle};
use cocyclab::linalg::{Matrix, DEFAULT_RANK_TOL};
use cocyclab::lyapunov::{spectrum_qr, McParams};

fn show(name: &str, c: &Cocycle, k: usize) -> cocyclab::Result<()> {
    let est = spectrum_qr(c, k, &McParams::new(500, 50, 0))?;
    println!(
        "{name}: Theta_{k} = {:.4} (positive: {}), L_{k} = {}",
        theta_k(c, k)?,
        theta_positive(c, k, DEFAULT_RANK_TOL)?,
        est.values[k - 1]
    );
    Ok(())
}

fn main() -> cocyclab::Result<()> {
    let e = |i: usize| {
        let mut v = vec![0.0; 3];
        v[i] = 1.0;
        v
    };
    let orthogonal = Cocycle::uniform(vec![Matrix::outer(&e(0), &e(0)), Matrix::outer(&e(1), &e(1))])?;
    show("orthogonal projections", &orthogonal, 1)?;
    let overlapping = Cocycle::uniform(vec![
        Matrix::outer(&e(0), &[1.0, 1.0, 0.0]),
        Matrix::outer(&e(1), &[1.0, 0.5, 0.0]),
    ])?;
    show("overlapping projections", &overlapping, 1)
}
