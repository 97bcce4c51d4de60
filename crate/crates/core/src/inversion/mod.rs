//! Series reconstruction of the initial pressure from circular data
//! `c1 p + c2 dp/dn` and the range-condition diagnostic for pressure data.
//!
//! With `C_k(j)` the cosine transform of the angular coefficient `g_k` at
//! `w[j,|k|] / R` and `S_k(j)` the sine transform of `t g_k(t)` there,
//!
//! ```text
//! A:  f(rho, phi) = -4 / (c2 pi sqrt(2 pi))      sum_k e^{ik phi} sum_j J_|k|(w rho / R) C_k(j) / (w^2 J_{|k|+1}(w)^3)
//! B:  f(rho, phi) =  4 / (c1 R^2 pi sqrt(2 pi)) sum_k e^{ik phi} sum_j J_|k|(w rho / R) S_k(j) / (w   J_{|k|+1}(w)^3)
//! ```
//!
//! Formula A needs `c2 != 0` and is exact for any `c1`; formula B is exact
//! for pressure data (`c2 = 0`).

mod range;
mod reconstruct;

pub use range::range_residual;
pub use reconstruct::{invert, PolarImage, Reconstructor};

use thiserror::Error;

use crate::harmonics::HarmonicsError;
use crate::specfun::SpecFunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Formula {
    A,
    B,
}

impl Formula {
    /// The formula that is exact for data weights `(c1, c2)`.
    pub fn matched(c2: f64) -> Self {
        if c2 != 0.0 {
            Formula::A
        } else {
            Formula::B
        }
    }
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Formula::A => "A",
            Formula::B => "B",
        })
    }
}

impl std::str::FromStr for Formula {
    type Err = InversionError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Formula::A),
            "B" | "b" => Ok(Formula::B),
            _ => Err(InversionError::Config(format!(
                "unknown formula {s:?}, expected A or B"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InversionError {
    #[error("invalid reconstruction config: {0}")]
    Config(String),
    #[error("data does not match the reconstruction geometry: {0}")]
    Geometry(String),
    #[error(transparent)]
    Harmonics(#[from] HarmonicsError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, InversionError>;

/// Formula choice, data weights and truncation for a reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionConfig {
    formula: Formula,
    c1: f64,
    c2: f64,
    n_r: usize,
    grid: usize,
    radius: f64,
    time_samples: Option<usize>,
}

impl ReconstructionConfig {
    pub const DEFAULT_ROOTS: usize = 180;
    pub const DEFAULT_GRID: usize = 280;

    /// `n_r = 180` zeros per order, a 280 x 280 output grid, `R = 1` and
    /// the full time record.
    pub fn new(formula: Formula, c1: f64, c2: f64) -> Result<Self> {
        let config = Self {
            formula,
            c1,
            c2,
            n_r: Self::DEFAULT_ROOTS,
            grid: Self::DEFAULT_GRID,
            radius: 1.0,
            time_samples: None,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_roots(mut self, n_r: usize) -> Result<Self> {
        self.n_r = n_r;
        self.validate()?;
        Ok(self)
    }

    pub fn with_grid(mut self, n: usize) -> Result<Self> {
        self.grid = n;
        self.validate()?;
        Ok(self)
    }

    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        self.radius = radius;
        self.validate()?;
        Ok(self)
    }

    /// Uses only the first `n` time samples of the data.
    pub fn with_time_samples(mut self, n: Option<usize>) -> Result<Self> {
        self.time_samples = n;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(InversionError::Config(m));
        if !self.c1.is_finite() || !self.c2.is_finite() {
            return fail("weights must be finite".into());
        }
        match self.formula {
            Formula::A if self.c2 == 0.0 => {
                return fail("formula A requires c2 != 0".into());
            }
            Formula::B if self.c1 == 0.0 => {
                return fail("formula B requires c1 != 0".into());
            }
            _ => {}
        }
        if self.n_r == 0 {
            return fail("need at least one Bessel zero per order".into());
        }
        if self.grid < 2 {
            return fail(format!(
                "output grid must be at least 2x2, got {}",
                self.grid
            ));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return fail(format!("radius must be positive, got {}", self.radius));
        }
        if self.time_samples == Some(0) {
            return fail("time sample count must be positive".into());
        }
        Ok(())
    }

    pub fn formula(&self) -> Formula {
        self.formula
    }

    pub fn weights(&self) -> (f64, f64) {
        (self.c1, self.c2)
    }

    pub fn roots_per_order(&self) -> usize {
        self.n_r
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn time_samples(&self) -> Option<usize> {
        self.time_samples
    }
}
