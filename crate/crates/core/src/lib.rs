pub mod cli;
pub mod cocycle;
pub mod error;
pub mod extreal;
pub mod io;
pub mod irreducibility;
pub mod linalg;
pub mod lyapunov;
pub mod mc;
pub mod oracles;
pub mod reduction;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
