//! Test images, calibrated measurement noise and error metrics.

mod metrics;
mod noise;
mod shapes;

pub use metrics::{data_error, relative_error, RelativeError};
pub use noise::add_noise;
pub use shapes::{rasterize, PhantomSpec, Primitive};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhantomError {
    #[error("primitive {index} reaches radius {reach:.4}, beyond the support limit {limit}")]
    Support {
        index: usize,
        reach: f64,
        limit: f64,
    },
    #[error("invalid phantom: {0}")]
    Invalid(String),
    #[error("noise level must be finite and non-negative, got {0}")]
    NoiseLevel(f64),
    #[error("grids or geometries differ")]
    Mismatch,
}

pub type Result<T> = std::result::Result<T, PhantomError>;
