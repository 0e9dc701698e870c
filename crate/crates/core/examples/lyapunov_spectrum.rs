//! Spectrum by QR deflation, checked against top exponents of exterior powers.

use cocyclab::cocycle::Cocycle;
use cocyclab::linalg::Matrix;
use cocyclab::lyapunov::{exterior_consistency, spectrum_qr, McParams};

fn main() -> cocyclab::Result<()> {
    let a0 = Matrix::from_rows(&[vec![1.2, 0.3, 0.0], vec![-0.4, 0.9, 0.2], vec![0.1, 0.0, 0.7]])?;
    let a1 = Matrix::from_rows(&[vec![0.5, -1.0, 0.3], vec![0.8, 0.2, 0.0], vec![0.0, 0.6, 1.1]])?;
    let c = Cocycle::new(vec![0.3, 0.7], vec![a0, a1])?;
    let p = McParams::new(3000, 100, 2);
    let est = spectrum_qr(&c, 3, &p)?;
    for (j, (v, s)) in est.values.iter().zip(&est.stderr).enumerate() {
        println!("L_{} = {v:.5} ± {s:.1e}", j + 1);
    }
    for k in 1..=3 {
        let x = exterior_consistency(&c, k, &p)?;
        println!(
            "k={k}: top of exterior power {:.5}, L_1+..+L_k {:.5}, |diff| {:.1e} (stderr {:.1e})",
            x.exterior_top, x.partial_sum, x.residual, x.combined_stderr
        );
    }
    Ok(())
}
