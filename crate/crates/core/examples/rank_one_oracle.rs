//! Closed-form exponent of a rank-one family against both estimators.

use cocyclab::io::read_cocycle;
use cocyclab::linalg::DEFAULT_RANK_TOL;
use cocyclab::lyapunov::{top_exponent_mc, McParams};
use cocyclab::oracles::rank_one_exact_l1;
use cocyclab::reduction::{markov_top_exponent, reduce};

fn main() -> cocyclab::Result<()> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/rank1.json");
    let c = read_cocycle(&path)?;
    let p = McParams::new(2000, 200, 4);
    let exact = rank_one_exact_l1(&c, DEFAULT_RANK_TOL)?;
    let mc = top_exponent_mc(&c, &p)?;
    let markov = markov_top_exponent(&reduce(&c, 1, DEFAULT_RANK_TOL)?, &p)?;
    println!("exact     {exact:.6}");
    println!("products  {:.6} ± {:.1e}", mc.values[0], mc.stderr[0]);
    println!("reduced   {:.6} ± {:.1e}", markov.values[0], markov.stderr[0]);
    Ok(())
}
