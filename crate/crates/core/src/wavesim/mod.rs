//! Free-space 2D wave propagation from an initial pressure and sampling of
//! the resulting field on a circle of detectors.
//!
//! The solver is spectral in space and exact in time: on a periodic box large
//! enough that no wave wraps around before the final time, the solution is
//! `p(t) = IFFT(cos(t |xi|) FFT(f))`.

mod field;
mod forward;
mod kspace;
mod sensor;

pub use field::ScalarField2D;
pub use forward::{forward_operator, simulate_measurements, Acquisition, Measurements};
pub use kspace::{kspace_step_solution, SpectralPropagator};
pub use sensor::SensorData;

use thiserror::Error;

/// Initial data must vanish outside this radius.
pub const SUPPORT_RADIUS: f64 = 0.9;

/// Relative size `|f| / max |f|` tolerated outside [`SUPPORT_RADIUS`].
pub const SUPPORT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WaveError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("non-finite value in input")]
    NonFinite,
    #[error(
        "initial data not supported in the disc of radius {max_radius}: relative value {relative} at radius {radius}"
    )]
    SupportViolation {
        max_radius: f64,
        radius: f64,
        relative: f64,
    },
    #[error("invalid acquisition: {0}")]
    InvalidAcquisition(String),
    #[error("invalid time list: {0}")]
    InvalidTimes(String),
}

pub type Result<T> = std::result::Result<T, WaveError>;

/// Checks that `f` is negligible outside [`SUPPORT_RADIUS`].
pub fn check_support(f: &ScalarField2D) -> Result<()> {
    let peak = f.max_abs();
    if peak == 0.0 {
        return Ok(());
    }
    let n = f.nx();
    for j in 0..n {
        let y = f.coord(j);
        for i in 0..n {
            let x = f.coord(i);
            let r = x.hypot(y);
            let relative = f.get(i, j).abs() / peak;
            if r > SUPPORT_RADIUS && relative > SUPPORT_TOLERANCE {
                return Err(WaveError::SupportViolation {
                    max_radius: SUPPORT_RADIUS,
                    radius: r,
                    relative,
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_check() {
        let inside = ScalarField2D::from_fn(41, |x, y| (0.85 - x.hypot(y)).max(0.0)).unwrap();
        assert!(check_support(&inside).is_ok());
        let outside = ScalarField2D::from_fn(41, |x, _| (x > 0.92) as u8 as f64).unwrap();
        assert!(matches!(
            check_support(&outside),
            Err(WaveError::SupportViolation { .. })
        ));
        assert!(check_support(&ScalarField2D::zeros(9, 9).unwrap()).is_ok());
    }
}
