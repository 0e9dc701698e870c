//! Deviation tails, LDT rate fits, and Hölder-modulus probes.
//!
//! Neighbourhoods of a cocycle inside the constant-rank class are explored
//! with multiplicative perturbations `E A F`, `E, F` close to the identity;
//! additive perturbations would leave the class.

pub mod holder;
pub mod ldt;

pub use holder::{fit_holder, holder_points, holder_probe, HolderFit, HolderPath, HolderPoint, HolderReport};
pub use ldt::{
    deviation_tail, fit_ldt_rate, perturbed_neighbor, pilot_reference, uniform_ldt_probe, LdtFit, NeighborFit,
    TailCurve, TailParams, TailRow, UniformLdtSummary,
};
