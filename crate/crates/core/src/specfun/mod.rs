//! Integer-order Bessel functions of the first kind and tables of their
//! positive zeros.
//!
//! Everything the series inversion needs from special functions lives here:
//! `J_k(x)` for `0 <= k <= MAX_ORDER` and the zeros `w[j,k]` used both as
//! evaluation frequencies and as Fourier-Bessel expansion nodes.

mod bessel;
mod roots;

pub use bessel::{bessel_j, bessel_j_pair, MAX_ORDER};
pub use roots::{bessel_roots, BesselRootTable};

pub(crate) use bessel::jn;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("Bessel argument must be finite and non-negative, got {0}")]
    Domain(f64),
    #[error("Bessel order {order} exceeds the supported maximum {max}")]
    UnsupportedOrder { order: usize, max: usize },
    #[error("zero {index} of J_{order} did not converge within {iterations} iterations")]
    RootNotConverged {
        order: usize,
        index: usize,
        iterations: usize,
    },
    #[error("no sign change of J_{order} on [{lo}, {hi}] while bracketing zero {index}")]
    Bracket {
        order: usize,
        index: usize,
        lo: f64,
        hi: f64,
    },
    #[error("invalid root table: {0}")]
    InvalidTable(String),
}

pub type Result<T> = std::result::Result<T, SpecFunError>;
