use num_complex::Complex64;
use rayon::prelude::*;

use super::{HarmonicSpectrum, HarmonicsError, Result};
use crate::specfun::BesselRootTable;

// Kernel phases advance by complex rotation and are reset to exact values
// at this stride.
const RESTART: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// `C{g_k}(lambda)`
    Cosine,
    /// `S{t g_k(t)}(lambda)`
    SineTWeighted,
}

/// Transform values at `lambda = w[j,|k|] / R` for every order `k` of a
/// spectrum and `1 <= j <= n_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients {
    kind: TransformKind,
    n_theta: usize,
    n_r: usize,
    // order-major: values[(k + n_theta/2) * n_r + j - 1]
    values: Vec<Complex64>,
}

impl SpectralCoefficients {
    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn roots_per_order(&self) -> usize {
        self.n_r
    }

    pub fn min_order(&self) -> isize {
        -((self.n_theta / 2) as isize)
    }

    pub fn max_order(&self) -> isize {
        (self.n_theta / 2) as isize - 1
    }

    /// Values for order `k`, indexed by `j - 1`.
    pub fn order(&self, k: isize) -> &[Complex64] {
        let o = (k - self.min_order()) as usize;
        assert!(o < self.n_theta, "order {k} out of range");
        &self.values[o * self.n_r..(o + 1) * self.n_r]
    }

    /// Value at 1-based zero index `j` and order `k`.
    pub fn get(&self, j: usize, k: isize) -> Complex64 {
        assert!(j >= 1 && j <= self.n_r);
        self.order(k)[j - 1]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// `(T / N_t) sum_n g[n] cos(lambda t_n)` with `t_n = n T / N_t`.
pub fn cosine_transform(trace: &[Complex64], t_final: f64, lambda: f64) -> Complex64 {
    riemann(trace, t_final, lambda, TransformKind::Cosine)
}

/// `(T / N_t) sum_n g[n] t_n sin(lambda t_n)`.
pub fn sine_tweighted_transform(trace: &[Complex64], t_final: f64, lambda: f64) -> Complex64 {
    riemann(trace, t_final, lambda, TransformKind::SineTWeighted)
}

fn riemann(trace: &[Complex64], t_final: f64, lambda: f64, kind: TransformKind) -> Complex64 {
    let n_t = trace.len();
    if n_t == 0 {
        return Complex64::default();
    }
    let dt = t_final / n_t as f64;
    let step = Complex64::from_polar(1.0, lambda * dt);
    let mut acc = Complex64::default();
    for (block, chunk) in trace.chunks(RESTART).enumerate() {
        let n0 = block * RESTART;
        let mut phase = Complex64::from_polar(1.0, lambda * n0 as f64 * dt);
        match kind {
            TransformKind::Cosine => {
                for g in chunk {
                    acc += g * phase.re;
                    phase *= step;
                }
            }
            TransformKind::SineTWeighted => {
                for (i, g) in chunk.iter().enumerate() {
                    let t = (n0 + i) as f64 * dt;
                    acc += g * (t * phase.im);
                    phase *= step;
                }
            }
        }
    }
    acc * dt
}

/// Cosine transform of every `g_k` at `w[j,|k|] / R`, `1 <= j <= n_r`,
/// with `n_r` the zero count of `roots`.
pub fn cosine_at_roots(
    spectrum: &HarmonicSpectrum,
    roots: &BesselRootTable,
    radius: f64,
) -> Result<SpectralCoefficients> {
    at_roots(spectrum, roots, radius, TransformKind::Cosine)
}

/// Sine transform of every `t g_k(t)` at `w[j,|k|] / R`.
pub fn sine_tweighted_at_roots(
    spectrum: &HarmonicSpectrum,
    roots: &BesselRootTable,
    radius: f64,
) -> Result<SpectralCoefficients> {
    at_roots(spectrum, roots, radius, TransformKind::SineTWeighted)
}

fn at_roots(
    spectrum: &HarmonicSpectrum,
    roots: &BesselRootTable,
    radius: f64,
    kind: TransformKind,
) -> Result<SpectralCoefficients> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(HarmonicsError::Invalid(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let needed = spectrum.n_theta() / 2;
    if roots.max_order() < needed {
        return Err(HarmonicsError::MissingOrders {
            needed,
            available: roots.max_order(),
            roots: roots.roots_per_order(),
        });
    }
    let n_r = roots.roots_per_order();
    let orders: Vec<isize> = spectrum.orders().collect();
    let t_final = spectrum.t_final();
    let values: Vec<Complex64> = orders
        .par_iter()
        .flat_map_iter(|&k| {
            let trace = spectrum.order(k);
            roots
                .order(k.unsigned_abs())
                .iter()
                .map(move |w| riemann(trace, t_final, w / radius, kind))
        })
        .collect();
    Ok(SpectralCoefficients {
        kind,
        n_theta: spectrum.n_theta(),
        n_r,
        values,
    })
}
