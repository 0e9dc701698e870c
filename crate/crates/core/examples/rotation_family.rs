//! `{P, R_α}` with equal weights: series value against Monte Carlo.
//!
//! The series sums over excursions between visits to the projection, so
//! the exponent per step is half of it.

use cocyclab::lyapunov::{top_exponent_mc, McParams};
use cocyclab::oracles::{rotation_cocycle, rotation_series_l1, rotation_stationary_check, Angle};

fn main() -> cocyclab::Result<()> {
    let p = McParams::new(2000, 200, 1);
    let angles = [
        Angle::Radians(1.0),
        Angle::Radians(0.3),
        Angle::rational_pi(1, 3)?,
        Angle::rational_pi(1, 2)?,
        Angle::rational_pi(0, 1)?,
    ];
    for alpha in angles {
        let o = rotation_series_l1(alpha, 64)?;
        let mc = top_exponent_mc(&rotation_cocycle(alpha), &p)?;
        println!(
            "alpha = {:.6}: series {:.6}, per step {:.6}, Monte Carlo {:.6} ± {:.1e}",
            alpha.radians(),
            o.partial_sum,
            o.per_step,
            mc.values[0],
            mc.stderr[0]
        );
    }
    let st = rotation_stationary_check(Angle::Radians(1.0), 30)?;
    println!("stationarity residual at J=30: {:.3e} (truncated mass {:.3e})", st.residual, st.bound);
    Ok(())
}
