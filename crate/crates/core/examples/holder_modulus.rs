//! Modulus of continuity of the top exponent along a rank-one path.

use cocyclab::io::read_cocycle;
use cocyclab::lyapunov::McParams;
use cocyclab::stats::{holder_probe, HolderPath};

fn main() -> cocyclab::Result<()> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/rank1.json");
    let c = read_cocycle(&path)?;
    let dir = HolderPath::random(&c, 7);
    let deltas = [1e-3, 2e-3, 4e-3, 8e-3, 1.6e-2, 3.2e-2];
    let rep = holder_probe(&c, 1, &dir, &deltas, &McParams::new(1000, 200, 7))?;
    for q in &rep.points {
        println!("delta {:.1e}: phi {:.3e} ± {:.1e}", q.delta, q.phi, q.stderr);
    }
    match (&rep.fit, &rep.reason) {
        (Some(f), _) => println!("alpha_hat {:.3}, constant {:.3}, r2 {:.4}", f.alpha_hat, f.constant, f.r2),
        (None, Some(why)) => println!("no fit: {why}"),
        (None, None) => unreachable!(),
    }
    Ok(())
}
