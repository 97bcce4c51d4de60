use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use serde_json::{Map, Value};

use super::{CliError, Result, RunConfig};
use crate::inversion::{range_residual, Formula, ReconstructionConfig, Reconstructor};
use crate::io::{self, Stored};
use crate::phantoms::{add_noise, data_error, rasterize, relative_error};
use crate::specfun::BesselRootTable;
use crate::wavesim::{simulate_measurements, ScalarField2D, SensorData};

pub const SWEEP_HEADER: &str =
    "model_c1,model_c2,formula,noise_percent,seed,data_error,data_error_full,reconstruction_error";

/// Weights a formula is applied with when none are configured: the data
/// weights, except that a zero weight in the formula's denominator is
/// replaced by 1 (so mismatched pairs use the formula's unit-weight form).
pub fn formula_weights(formula: Formula, (c1, c2): (f64, f64)) -> (f64, f64) {
    match formula {
        Formula::A => (c1, if c2 != 0.0 { c2 } else { 1.0 }),
        Formula::B => (if c1 != 0.0 { c1 } else { 1.0 }, c2),
    }
}

/// Rasterises the configured phantom and saves it as a field container,
/// optionally also as PGM and CSV.
pub fn cmd_phantom(
    cfg: &RunConfig,
    out: &Path,
    image: Option<&Path>,
    csv: Option<&Path>,
) -> Result<ScalarField2D> {
    cfg.validate()?;
    let f = rasterize(&cfg.phantom, cfg.grid)?;
    io::save(out, &Stored::Field(f.clone()), &phantom_extra(cfg))?;
    if let Some(path) = image {
        io::export_image(&f, path, None)?;
    }
    if let Some(path) = csv {
        io::export_csv(&f, path)?;
    }
    Ok(f)
}

#[derive(Debug, Clone)]
pub struct SimulateReport {
    pub data: SensorData,
    /// Relative data error over the whole record, when noise was added.
    pub data_error: Option<f64>,
    /// The same over the leading samples used for reconstruction.
    pub data_error_window: Option<f64>,
}

/// Phantom, forward simulation, optional noise and save.
pub fn cmd_simulate(cfg: &RunConfig, out: &Path) -> Result<SimulateReport> {
    cfg.validate()?;
    let f = rasterize(&cfg.phantom, cfg.grid)?;
    let clean = simulate_measurements(&f, &cfg.acquisition)?.combine(cfg.model.c1, cfg.model.c2);
    let noisy = add_noise(&clean, cfg.noise.percent, cfg.noise.seed)?;
    let (full, window) = if cfg.noise.percent > 0.0 {
        let (a, b) = errors(&noisy, &clean, cfg.reconstruction.time_samples)?;
        (Some(a), Some(b))
    } else {
        (None, None)
    };
    let mut extra = phantom_extra(cfg);
    extra.insert("noise_percent".into(), cfg.noise.percent.into());
    extra.insert("seed".into(), cfg.noise.seed.into());
    io::save(out, &Stored::Sinogram(noisy.clone()), &extra)?;
    Ok(SimulateReport {
        data: noisy,
        data_error: full,
        data_error_window: window,
    })
}

#[derive(Debug, Clone)]
pub struct ReconstructReport {
    pub field: ScalarField2D,
    pub formula: Formula,
    pub weights: (f64, f64),
    pub relative_error: Option<f64>,
}

/// Loads a sinogram, reconstructs it and saves the field (and PGM).
pub fn cmd_reconstruct(
    cfg: &RunConfig,
    data: &Path,
    out: &Path,
    image: Option<&Path>,
    truth: Option<&Path>,
) -> Result<ReconstructReport> {
    cfg.validate()?;
    cfg.needs_even_detectors()?;
    let g = io::load_sinogram(data)?;
    let a = &cfg.acquisition;
    if g.n_theta() != a.n_theta
        || g.n_t() != a.n_t
        || g.radius() != a.radius
        || g.t_final() != a.t_final
    {
        return Err(CliError::Validation(format!(
            "sinogram geometry ({} detectors, {} samples, R = {}, T = {}) differs from the config ({}, {}, {}, {})",
            g.n_theta(),
            g.n_t(),
            g.radius(),
            g.t_final(),
            a.n_theta,
            a.n_t,
            a.radius,
            a.t_final
        )));
    }
    let truth = truth.map(io::load_field).transpose()?;
    if let Some(t) = &truth {
        if t.nx() != cfg.reconstruction.grid {
            return Err(CliError::Validation(format!(
                "truth grid {} differs from reconstruction grid {}",
                t.nx(),
                cfg.reconstruction.grid
            )));
        }
    }

    let (formula, weights) = choose(cfg, g.weights());
    let rec = reconstructor(cfg, formula, weights)?;
    let field = rec.invert(&g)?;

    let mut extra = Map::new();
    extra.insert("formula".into(), formula.to_string().into());
    extra.insert("c1".into(), weights.0.into());
    extra.insert("c2".into(), weights.1.into());
    extra.insert("n_r".into(), cfg.reconstruction.n_r.into());
    extra.insert(
        "time_samples".into(),
        cfg.reconstruction.time_samples.unwrap_or(g.n_t()).into(),
    );
    io::save(out, &Stored::Field(field.clone()), &extra)?;
    if let Some(path) = image {
        io::export_image(&field, path, None)?;
    }
    let relative_error = truth
        .map(|t| relative_error(&field, &t).map(|e| e.value))
        .transpose()?;
    Ok(ReconstructReport {
        field,
        formula,
        weights,
        relative_error,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub model: [f64; 2],
    pub formula: Formula,
    pub noise_percent: f64,
    pub seed: u64,
    /// Over the samples the reconstruction uses.
    pub data_error: f64,
    pub data_error_full: f64,
    pub reconstruction_error: f64,
}

/// Simulates once, then reconstructs every (model, formula, level, seed)
/// combination and writes one CSV row per run.
pub fn cmd_noise_sweep(cfg: &RunConfig, out: &Path) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    cfg.needs_even_detectors()?;
    let mut rows = Vec::new();
    let sweep = &cfg.sweep;
    let runs = sweep.levels.len() * sweep.seeds.len() * sweep.models.len() * sweep.formulas.len();
    if runs > 0 {
        let f = rasterize(&cfg.phantom, cfg.grid)?;
        let truth = if cfg.reconstruction.grid == cfg.grid {
            f.clone()
        } else {
            rasterize(&cfg.phantom, cfg.reconstruction.grid)?
        };
        let measured = simulate_measurements(&f, &cfg.acquisition)?;
        let mut cache: HashMap<(Formula, u64, u64), Reconstructor> = HashMap::new();
        for &[c1, c2] in &sweep.models {
            let clean = measured.combine(c1, c2);
            for &formula in &sweep.formulas {
                let weights = formula_weights(formula, (c1, c2));
                let key = (formula, weights.0.to_bits(), weights.1.to_bits());
                if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
                    e.insert(reconstructor(cfg, formula, weights)?);
                }
                let rec = &cache[&key];
                for &level in &sweep.levels {
                    for &seed in &sweep.seeds {
                        let noisy = add_noise(&clean, level, seed)?;
                        let (full, window) =
                            errors(&noisy, &clean, cfg.reconstruction.time_samples)?;
                        let field = rec.invert(&noisy)?;
                        rows.push(SweepRow {
                            model: [c1, c2],
                            formula,
                            noise_percent: level,
                            seed,
                            data_error: window,
                            data_error_full: full,
                            reconstruction_error: relative_error(&field, &truth)?.value,
                        });
                    }
                }
            }
        }
    }

    let mut text = String::from(SWEEP_HEADER);
    text.push('\n');
    for r in &rows {
        writeln!(
            text,
            "{},{},{},{},{},{},{},{}",
            r.model[0],
            r.model[1],
            r.formula,
            r.noise_percent,
            r.seed,
            r.data_error,
            r.data_error_full,
            r.reconstruction_error
        )
        .expect("writing to a string");
    }
    std::fs::write(out, text).map_err(|e| {
        CliError::Io(io::IoError::File {
            path: out.display().to_string(),
            source: e,
        })
    })?;
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeReport {
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Range-condition residual of a sinogram against the configured threshold.
pub fn cmd_range_check(cfg: &RunConfig, data: &Path) -> Result<RangeReport> {
    cfg.validate()?;
    let g = io::load_sinogram(data)?;
    if g.n_theta() % 2 != 0 {
        return Err(CliError::Validation(format!(
            "range check needs an even detector count, got {}",
            g.n_theta()
        )));
    }
    let roots = BesselRootTable::cached(g.n_theta() / 2, cfg.reconstruction.n_r)?;
    let g = match cfg.reconstruction.time_samples {
        Some(n) if n < g.n_t() => g.truncated(n)?,
        _ => g,
    };
    let residual = range_residual(&g, &roots)?;
    let threshold = cfg.range_check.threshold;
    Ok(RangeReport {
        residual,
        threshold,
        pass: residual <= threshold,
    })
}

fn choose(cfg: &RunConfig, data_weights: (f64, f64)) -> (Formula, (f64, f64)) {
    let r = &cfg.reconstruction;
    let formula = r
        .formula
        .unwrap_or_else(|| Formula::matched(data_weights.1));
    let weights = match r.weights {
        Some([a, b]) => (a, b),
        None => formula_weights(formula, data_weights),
    };
    (formula, weights)
}

fn reconstructor(cfg: &RunConfig, formula: Formula, (c1, c2): (f64, f64)) -> Result<Reconstructor> {
    let r = &cfg.reconstruction;
    let config = ReconstructionConfig::new(formula, c1, c2)?
        .with_roots(r.n_r)?
        .with_grid(r.grid)?
        .with_radius(cfg.acquisition.radius)?
        .with_time_samples(r.time_samples)?;
    Ok(Reconstructor::new(config, cfg.acquisition.n_theta)?)
}

fn errors(noisy: &SensorData, clean: &SensorData, window: Option<usize>) -> Result<(f64, f64)> {
    let full = data_error(noisy, clean)?;
    let windowed = match window {
        Some(n) if n < clean.n_t() => data_error(&noisy.truncated(n)?, &clean.truncated(n)?)?,
        _ => full,
    };
    Ok((full, windowed))
}

fn phantom_extra(cfg: &RunConfig) -> Map<String, Value> {
    let mut extra = Map::new();
    extra.insert("grid".into(), cfg.grid.into());
    extra.insert(
        "phantom".into(),
        serde_json::to_value(&cfg.phantom).expect("phantom serialises"),
    );
    extra
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_weights_per_formula() {
        assert_eq!(formula_weights(Formula::A, (1.0, 0.0)), (1.0, 1.0));
        assert_eq!(formula_weights(Formula::A, (0.5, 2.0)), (0.5, 2.0));
        assert_eq!(formula_weights(Formula::B, (0.0, 1.0)), (1.0, 1.0));
        assert_eq!(formula_weights(Formula::B, (2.0, 0.0)), (2.0, 0.0));
    }
}
