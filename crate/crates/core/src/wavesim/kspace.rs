use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{check_support, Result, ScalarField2D, WaveError, SUPPORT_RADIUS};

/// Smallest `m >= n` whose only prime factors are 2, 3, 5 and 7.
pub(crate) fn fast_len(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5, 7] {
            while r.is_multiple_of(p) {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

/// Square range of grid indices `start..start + len` along both axes;
/// indices outside `0..n` address the padding around the field.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Window {
    pub start: isize,
    pub len: usize,
}

pub(crate) struct Scratch {
    full: Vec<Complex64>,
    cols: Vec<Complex64>,
    fft: Vec<Complex64>,
}

/// Spectrum of a field embedded at the origin corner of a periodic
/// `size x size` box with the grid spacing of the field.
pub(crate) struct SpectralBox {
    size: usize,
    // FFT(f) / size^2, row-major over (ky, kx)
    spectrum: Vec<Complex64>,
    wavenumber: Vec<f64>,
    inverse: Arc<dyn Fft<f64>>,
}

impl SpectralBox {
    pub fn new(field: &ScalarField2D, size: usize) -> Self {
        let n = field.nx();
        assert!(size >= n);
        let p = size;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(p);
        let inverse = planner.plan_fft_inverse(p);

        let scale = 1.0 / (p * p) as f64;
        let mut data = vec![Complex64::default(); p * p];
        for j in 0..n {
            for i in 0..n {
                data[j * p + i] = Complex64::new(field.get(i, j) * scale, 0.0);
            }
        }
        let mut scratch = vec![Complex64::default(); forward.get_inplace_scratch_len()];
        forward.process_with_scratch(&mut data, &mut scratch);
        let mut t = transpose(&data, p);
        forward.process_with_scratch(&mut t, &mut scratch);
        let spectrum = transpose(&t, p);

        let dk = 2.0 * PI / (p as f64 * field.spacing());
        let freq: Vec<f64> = (0..p)
            .map(|b| {
                let s = if 2 * b < p {
                    b as f64
                } else {
                    b as f64 - p as f64
                };
                s * dk
            })
            .collect();
        let mut wavenumber = Vec::with_capacity(p * p);
        for ky in &freq {
            for kx in &freq {
                wavenumber.push(kx.hypot(*ky));
            }
        }

        Self {
            size: p,
            spectrum,
            wavenumber,
            inverse,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `|xi|` for every box frequency, same layout as the spectrum.
    pub fn wavenumber(&self) -> &[f64] {
        &self.wavenumber
    }

    pub fn scratch(&self, window: Window) -> Scratch {
        let p = self.size;
        Scratch {
            full: vec![Complex64::default(); p * p],
            cols: vec![Complex64::default(); p * window.len],
            fft: vec![Complex64::default(); self.inverse.get_inplace_scratch_len()],
        }
    }

    /// Evaluates `IFFT(f^ * c_a)` and, when given, `IFFT(f^ * c_b)` on the
    /// window with one complex transform: the two real results come back as
    /// real and imaginary parts. Outputs are row-major `[y][x]`.
    pub fn render(
        &self,
        ca: &[f64],
        cb: Option<&[f64]>,
        window: Window,
        scratch: &mut Scratch,
        out_a: &mut [f64],
        out_b: Option<&mut [f64]>,
    ) {
        let p = self.size;
        let w = window.len;
        let full = &mut scratch.full;
        match cb {
            Some(cb) => {
                for (((z, s), a), b) in full.iter_mut().zip(&self.spectrum).zip(ca).zip(cb) {
                    *z = s * Complex64::new(*a, *b);
                }
            }
            None => {
                for ((z, s), a) in full.iter_mut().zip(&self.spectrum).zip(ca) {
                    *z = s * a;
                }
            }
        }
        self.inverse.process_with_scratch(full, &mut scratch.fft);

        let index: Vec<usize> = (0..w)
            .map(|o| (window.start + o as isize).rem_euclid(p as isize) as usize)
            .collect();
        for (wx, &bx) in index.iter().enumerate() {
            let col = &mut scratch.cols[wx * p..(wx + 1) * p];
            for (ky, c) in col.iter_mut().enumerate() {
                *c = full[ky * p + bx];
            }
        }
        self.inverse
            .process_with_scratch(&mut scratch.cols, &mut scratch.fft);

        for (wy, &by) in index.iter().enumerate() {
            for wx in 0..w {
                out_a[wy * w + wx] = scratch.cols[wx * p + by].re;
            }
        }
        if let Some(out_b) = out_b {
            for (wy, &by) in index.iter().enumerate() {
                for wx in 0..w {
                    out_b[wy * w + wx] = scratch.cols[wx * p + by].im;
                }
            }
        }
    }
}

fn transpose(data: &[Complex64], p: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); p * p];
    const B: usize = 32;
    for jb in (0..p).step_by(B) {
        for ib in (0..p).step_by(B) {
            for j in jb..(jb + B).min(p) {
                for i in ib..(ib + B).min(p) {
                    out[i * p + j] = data[j * p + i];
                }
            }
        }
    }
    out
}

/// Box size for a field of `n` nodes whose waves must not wrap back into
/// `[-1 - margin, 1 + margin]^2` before time `t_max`.
pub(crate) fn padded_size(n: usize, spacing: f64, t_max: f64, margin: f64) -> usize {
    let period = t_max + 1.0 + margin + SUPPORT_RADIUS + 0.1;
    fast_len((n + 4).max((period / spacing).ceil() as usize))
}

/// Exact-in-time spectral propagator `f -> IFFT(cos(t |xi|) FFT(f))` for the
/// initial-value problem `p(0) = f`, `p_t(0) = 0`.
pub struct SpectralPropagator {
    n: usize,
    inner: SpectralBox,
}

impl SpectralPropagator {
    /// Treats the grid itself as one period, so the solution is periodic in
    /// both directions with period `n h`.
    pub fn periodic(f: &ScalarField2D) -> Self {
        Self {
            n: f.nx(),
            inner: SpectralBox::new(f, f.nx()),
        }
    }

    /// Free-space propagation up to `t_max`: the field must be supported in
    /// the disc of radius [`SUPPORT_RADIUS`] and is zero-padded so that no
    /// wave wraps around before `t_max`.
    pub fn free_space(f: &ScalarField2D, t_max: f64) -> Result<Self> {
        check_support(f)?;
        if !(t_max >= 0.0 && t_max.is_finite()) {
            return Err(WaveError::InvalidTimes(format!(
                "final time must be finite and non-negative, got {t_max}"
            )));
        }
        let size = padded_size(f.nx(), f.spacing(), t_max, 0.0);
        Ok(Self {
            n: f.nx(),
            inner: SpectralBox::new(f, size),
        })
    }

    pub fn box_size(&self) -> usize {
        self.inner.size()
    }

    /// Pressure on the original grid at each of `times`, in order.
    pub fn solutions(&self, times: &[f64]) -> Result<Vec<ScalarField2D>> {
        if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(WaveError::InvalidTimes(
                "times must be finite and non-negative".into(),
            ));
        }
        let n = self.n;
        let window = Window { start: 0, len: n };
        let pairs: Vec<&[f64]> = times.chunks(2).collect();
        let fields: Vec<Vec<Vec<f64>>> = pairs
            .par_iter()
            .map_init(
                || self.inner.scratch(window),
                |scratch, pair| {
                    let ca: Vec<f64> = self
                        .inner
                        .wavenumber()
                        .iter()
                        .map(|k| (pair[0] * k).cos())
                        .collect();
                    let cb: Option<Vec<f64>> = pair.get(1).map(|t| {
                        self.inner
                            .wavenumber()
                            .iter()
                            .map(|k| (t * k).cos())
                            .collect()
                    });
                    let mut a = vec![0.0; n * n];
                    let mut b = vec![0.0; n * n];
                    self.inner.render(
                        &ca,
                        cb.as_deref(),
                        window,
                        scratch,
                        &mut a,
                        cb.as_ref().map(|_| b.as_mut_slice()),
                    );
                    if cb.is_some() {
                        vec![a, b]
                    } else {
                        vec![a]
                    }
                },
            )
            .collect();
        fields
            .into_iter()
            .flatten()
            .map(|v| ScalarField2D::new(n, n, v))
            .collect()
    }

    pub fn solution(&self, t: f64) -> Result<ScalarField2D> {
        Ok(self.solutions(&[t])?.remove(0))
    }
}

/// Pressure snapshots at the given increasing `times` for initial pressure
/// `f` supported in the disc of radius [`SUPPORT_RADIUS`].
pub fn kspace_step_solution(f: &ScalarField2D, times: &[f64]) -> Result<Vec<ScalarField2D>> {
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(WaveError::InvalidTimes(
            "times must be non-decreasing".into(),
        ));
    }
    let t_max = times.last().copied().unwrap_or(0.0);
    SpectralPropagator::free_space(f, t_max)?.solutions(times)
}
