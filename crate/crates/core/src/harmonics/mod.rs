//! Angular Fourier decomposition of sinograms and cosine / sine transforms
//! of the angular coefficients evaluated at scaled Bessel zeros.

mod spectrum;
mod transform;

pub use spectrum::{angular_decompose, HarmonicSpectrum};
pub use transform::{
    cosine_at_roots, cosine_transform, sine_tweighted_at_roots, sine_tweighted_transform,
    SpectralCoefficients, TransformKind,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarmonicsError {
    #[error("detector count must be even, got {0}")]
    OddDetectorCount(usize),
    #[error("root table covers orders up to {available} with {roots} zeros each, need orders up to {needed}")]
    MissingOrders {
        needed: usize,
        available: usize,
        roots: usize,
    },
    #[error("invalid spectrum: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, HarmonicsError>;
