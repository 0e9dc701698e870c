//! Deviation tails of the top exponent and the fitted rate constants.

use cocyclab::io::read_cocycle;
use cocyclab::oracles::rank_one_exact_l1;
use cocyclab::linalg::DEFAULT_RANK_TOL;
use cocyclab::stats::{deviation_tail, fit_ldt_rate, uniform_ldt_probe, TailParams};

fn main() -> cocyclab::Result<()> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/rank1.json");
    let c = read_cocycle(&path)?;
    let l_ref = rank_one_exact_l1(&c, DEFAULT_RANK_TOL)?;
    let p = TailParams {
        n_grid: vec![10, 20, 40, 80],
        eps_grid: vec![0.05, 0.1, 0.15, 0.2, 0.3],
        samples: 4000,
        seed: 11,
    };
    let tail = deviation_tail(&c, l_ref, &p)?;
    println!("L_1 = {l_ref:.6}");
    for row in &tail.rows {
        println!("n={:>3} eps={:.2}: p_hat {:.4} ± {:.4}", row.n, row.epsilon, row.p_hat, row.stderr);
    }
    let fit = fit_ldt_rate(&tail);
    println!("fit: C_hat {:?}, c_hat {:?}, r2 {:?}, usable {}", fit.big_c_hat, fit.c_hat, fit.r2, fit.usable);

    let small = TailParams { samples: 1000, ..p };
    let probe = uniform_ldt_probe(&c, 1, 0.05, 4, &small)?;
    println!("{} neighbours within 0.05: min c_hat {:?}, max C_hat {:?}", probe.trials, probe.min_c_hat, probe.max_big_c_hat);
    Ok(())
}
