//! Constant-rank reduction: semi-conjugacy, norm ratios, matching spectra.

use cocyclab::cocycle::{sample_word, theta_positive, Cocycle};
use cocyclab::linalg::{Matrix, DEFAULT_RANK_TOL};
use cocyclab::lyapunov::McParams;
use cocyclab::reduction::{
    intertwining_residual, kappa, norm_ratio_study, reduce, spectrum_agreement, verify_semiconjugacy,
};

fn main() -> cocyclab::Result<()> {
    // Rank 2 in dimension 4: A_i = U_i V_iᵗ.
    let u0 = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.5, 1.0], vec![0.0, -0.5], vec![0.3, 0.2]])?;
    let v0 = Matrix::from_rows(&[vec![0.8, 0.1], vec![0.0, 1.0], vec![0.4, 0.0], vec![-0.2, 0.6]])?;
    let u1 = Matrix::from_rows(&[vec![0.2, 1.0], vec![-1.0, 0.0], vec![0.5, 0.5], vec![0.0, 0.7]])?;
    let v1 = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.3, -0.4], vec![0.0, 0.9], vec![0.6, 0.1]])?;
    let c = Cocycle::new(vec![0.5, 0.5], vec![u0.matmul(&v0.transpose()), u1.matmul(&v1.transpose())])?;
    let k = 2;
    println!("Theta_{k} > 0: {}", theta_positive(&c, k, DEFAULT_RANK_TOL)?);

    let r = reduce(&c, k, DEFAULT_RANK_TOL)?;
    println!("intertwining residual {:.1e}, kappa {:.4}", intertwining_residual(&c, &r), kappa(&c, &r));

    let w = sample_word(c.probs(), 40, 5, 0)?;
    let rep = verify_semiconjugacy(&c, &r, &w)?;
    println!("word of length 40: residual {:.1e}, norm ratio {:.4} <= {:.4}", rep.residual, rep.ratio, rep.ratio_bound);

    let study = norm_ratio_study(&c, &r, 300, &[10, 100, 1000], 5)?;
    for b in &study.buckets {
        println!("  lengths <= {:>4}: {:>3} words, c_hat {:.4}", b.max_len, b.words, b.c_hat);
    }

    let agree = spectrum_agreement(&c, &r, k, &McParams::new(2000, 100, 5), DEFAULT_RANK_TOL)?;
    for j in 0..k {
        println!(
            "L_{}: original {:.5}, reduced {:.5}, residual {:.1e} (stderr {:.1e})",
            j + 1,
            agree.original.values[j],
            agree.reduced.values[j],
            agree.residuals[j],
            agree.combined_stderr[j]
        );
    }
    Ok(())
}
