//! Experiment pipeline behind the `patseries` binary: a TOML run config and
//! one function per subcommand.
//!
//! Every section of the config is optional; omitted values fall back to the
//! defaults shown here.
//!
//! ```toml
//! grid = 280                       # simulation grid (nodes per axis)
//!
//! [phantom]                        # default: the built-in four-shape phantom
//! smoothing = 0.02
//! primitives = [
//!   { shape = "disk", center = [0.0, 0.0], radius = 0.3, amplitude = 1.0 },
//!   { shape = "annulus", center = [0.2, 0.1], r_in = 0.1, r_out = 0.2, amplitude = 0.5 },
//! ]
//!
//! [acquisition]
//! n_theta = 300
//! n_t = 1600
//! t_final = 6.0
//! radius = 1.0
//!
//! [model]                          # data c1 p + c2 dp/dn
//! c1 = 1.0
//! c2 = 0.0
//!
//! [noise]
//! percent = 0.0
//! seed = 0
//!
//! [reconstruction]
//! # formula = "A"                  # default: the one matched to the data weights
//! # weights = [1.0, 1.0]           # default: derived from the data weights
//! n_r = 180
//! grid = 280
//! time_samples = 1200              # leading samples used; omit for all
//!
//! [sweep]
//! levels = [0.0, 10.0, 25.0, 50.0]
//! seeds = [0, 1, 2, 3, 4]
//! models = [[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
//! formulas = ["B", "A"]
//!
//! [range_check]
//! threshold = 0.05
//! ```

mod commands;

pub use commands::{
    cmd_noise_sweep, cmd_phantom, cmd_range_check, cmd_reconstruct, cmd_simulate, formula_weights,
    RangeReport, ReconstructReport, SimulateReport, SweepRow, SWEEP_HEADER,
};

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::harmonics::HarmonicsError;
use crate::inversion::{Formula, InversionError};
use crate::io::IoError;
use crate::phantoms::{PhantomError, PhantomSpec};
use crate::specfun::SpecFunError;
use crate::wavesim::{Acquisition, WaveError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    /// 2 for invalid input (config, files, geometry), 3 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<WaveError> for CliError {
    fn from(e: WaveError) -> Self {
        match e {
            WaveError::NonFinite => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<PhantomError> for CliError {
    fn from(e: PhantomError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SpecFunError> for CliError {
    fn from(e: SpecFunError) -> Self {
        match e {
            SpecFunError::RootNotConverged { .. } | SpecFunError::Bracket { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<HarmonicsError> for CliError {
    fn from(e: HarmonicsError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<InversionError> for CliError {
    fn from(e: InversionError) -> Self {
        match e {
            InversionError::Numerical(_) => CliError::Numerical(e.to_string()),
            InversionError::SpecFun(inner) => inner.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub c1: f64,
    pub c2: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self { c1: 1.0, c2: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub percent: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReconstructionSection {
    pub formula: Option<Formula>,
    pub weights: Option<[f64; 2]>,
    pub n_r: usize,
    pub grid: usize,
    pub time_samples: Option<usize>,
}

impl Default for ReconstructionSection {
    fn default() -> Self {
        Self {
            formula: None,
            weights: None,
            n_r: 180,
            grid: 280,
            time_samples: Some(1200),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub levels: Vec<f64>,
    pub seeds: Vec<u64>,
    pub models: Vec<[f64; 2]>,
    pub formulas: Vec<Formula>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            levels: vec![0.0, 10.0, 25.0, 50.0],
            seeds: (0..5).collect(),
            models: vec![[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            formulas: vec![Formula::B, Formula::A],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RangeCheckConfig {
    pub threshold: f64,
}

impl Default for RangeCheckConfig {
    fn default() -> Self {
        Self { threshold: 0.05 }
    }
}

/// Parameters of every subcommand in one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid: usize,
    pub phantom: PhantomSpec,
    pub acquisition: Acquisition,
    pub model: ModelConfig,
    pub noise: NoiseConfig,
    pub reconstruction: ReconstructionSection,
    pub sweep: SweepConfig,
    pub range_check: RangeCheckConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid: 280,
            phantom: PhantomSpec::default(),
            acquisition: Acquisition::default(),
            model: ModelConfig::default(),
            noise: NoiseConfig::default(),
            reconstruction: ReconstructionSection::default(),
            sweep: SweepConfig::default(),
            range_check: RangeCheckConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// Checks everything the commands rely on before any computation.
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(CliError::Validation(m));
        if self.grid < 2 {
            return fail(format!("grid must be at least 2, got {}", self.grid));
        }
        self.phantom.validate()?;
        self.acquisition.validate()?;
        let ModelConfig { c1, c2 } = self.model;
        if !c1.is_finite() || !c2.is_finite() || (c1 == 0.0 && c2 == 0.0) {
            return fail(format!(
                "model weights must be finite and not both zero, got ({c1}, {c2})"
            ));
        }
        check_noise(self.noise.percent)?;
        let r = &self.reconstruction;
        if r.n_r == 0 {
            return fail("reconstruction.n_r must be at least 1".into());
        }
        if r.grid < 2 {
            return fail(format!(
                "reconstruction.grid must be at least 2, got {}",
                r.grid
            ));
        }
        if let Some(n) = r.time_samples {
            if n == 0 || n > self.acquisition.n_t {
                return fail(format!(
                    "reconstruction.time_samples must lie in 1..={}, got {n}",
                    self.acquisition.n_t
                ));
            }
        }
        if let Some([a, b]) = r.weights {
            if !a.is_finite() || !b.is_finite() {
                return fail("reconstruction.weights must be finite".into());
            }
        }
        for &level in &self.sweep.levels {
            check_noise(level)?;
        }
        for &[a, b] in &self.sweep.models {
            if !a.is_finite() || !b.is_finite() || (a == 0.0 && b == 0.0) {
                return fail(format!("sweep model ({a}, {b}) is invalid"));
            }
        }
        if !(self.range_check.threshold > 0.0 && self.range_check.threshold.is_finite()) {
            return fail(format!(
                "range_check.threshold must be positive, got {}",
                self.range_check.threshold
            ));
        }
        Ok(())
    }

    pub(crate) fn needs_even_detectors(&self) -> Result<()> {
        if !self.acquisition.n_theta.is_multiple_of(2) {
            return Err(CliError::Validation(format!(
                "reconstruction needs an even detector count, got {}",
                self.acquisition.n_theta
            )));
        }
        Ok(())
    }
}

fn check_noise(percent: f64) -> Result<()> {
    if !(percent >= 0.0 && percent.is_finite()) {
        return Err(CliError::Validation(format!(
            "noise percent must be finite and non-negative, got {percent}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let cfg = RunConfig::from_toml("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        cfg.validate().unwrap();
    }

    #[test]
    fn toml_round_trip() {
        let mut cfg = RunConfig::default();
        cfg.reconstruction.formula = Some(Formula::A);
        cfg.noise.percent = 12.5;
        let back = RunConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_sections_and_typos() {
        let cfg = RunConfig::from_toml("[acquisition]\nn_theta = 64\n[model]\nc2 = 1.0\n").unwrap();
        assert_eq!(cfg.acquisition.n_theta, 64);
        assert_eq!(cfg.acquisition.n_t, 1600);
        assert_eq!((cfg.model.c1, cfg.model.c2), (1.0, 1.0));
        assert!(RunConfig::from_toml("[acquisition]\nntheta = 64\n").is_err());
        let custom = "[phantom]\nprimitives = [{ shape = \"disk\", center = [0.1, 0.0], radius = 0.2, amplitude = 1.0 }]\n";
        assert_eq!(RunConfig::from_toml(custom).unwrap().phantom.smoothing, 0.0);
        assert!(RunConfig::from_toml(&custom.replace("radius", "radios")).is_err());
        assert!(RunConfig::from_toml("[phantom]\nprimitives = []\nblur = 1.0\n").is_err());
    }

    #[test]
    fn validation_messages() {
        let mut cfg = RunConfig::default();
        cfg.reconstruction.time_samples = Some(5000);
        let e = cfg.validate().unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("time_samples"));

        let cfg = RunConfig {
            model: ModelConfig { c1: 0.0, c2: 0.0 },
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());

        let mut cfg = RunConfig::default();
        cfg.acquisition.radius = 0.5;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            CliError::from(InversionError::Numerical("x".into())).exit_code(),
            3
        );
        assert_eq!(
            CliError::from(InversionError::Config("x".into())).exit_code(),
            2
        );
        assert_eq!(
            CliError::from(WaveError::InvalidGrid("x".into())).exit_code(),
            2
        );
    }
}
