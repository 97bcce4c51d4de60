use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kspace::{padded_size, SpectralBox, Window};
use super::{check_support, Result, ScalarField2D, SensorData, WaveError, SUPPORT_RADIUS};

// Time samples per parallel task; each task restarts the cosine recurrence
// from exact values.
const BLOCK: usize = 64;

/// Detector circle and sampling schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Acquisition {
    pub n_theta: usize,
    pub n_t: usize,
    pub t_final: f64,
    pub radius: f64,
}

impl Default for Acquisition {
    fn default() -> Self {
        Self {
            n_theta: 300,
            n_t: 1600,
            t_final: 6.0,
            radius: 1.0,
        }
    }
}

impl Acquisition {
    pub fn validate(&self) -> Result<()> {
        if self.n_theta == 0 || self.n_t == 0 {
            return Err(WaveError::InvalidAcquisition(format!(
                "need at least one detector and one time sample, got {} x {}",
                self.n_theta, self.n_t
            )));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(WaveError::InvalidAcquisition(format!(
                "final time must be positive, got {}",
                self.t_final
            )));
        }
        if !(self.radius > SUPPORT_RADIUS && self.radius <= 1.0) {
            return Err(WaveError::InvalidAcquisition(format!(
                "detector radius must lie in ({SUPPORT_RADIUS}, 1], got {}",
                self.radius
            )));
        }
        Ok(())
    }

    pub fn time_step(&self) -> f64 {
        self.t_final / self.n_t as f64
    }
}

/// Pressure and outward normal derivative recorded on the detector circle.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurements {
    pub pressure: SensorData,
    pub normal_derivative: SensorData,
}

impl Measurements {
    /// Data of the model `c1 p + c2 dp/dn`.
    pub fn combine(&self, c1: f64, c2: f64) -> SensorData {
        self.pressure
            .combine(c1, &self.normal_derivative, c2)
            .expect("components share one geometry")
    }
}

struct Detector {
    i0: isize,
    j0: isize,
    fx: f64,
    fy: f64,
    cos: f64,
    sin: f64,
}

/// Simulates the wave started by `f` and records `p` and `dp/dn` on the
/// detector circle.
///
/// Values at detectors come from bilinear interpolation of the grid pressure
/// and of its central-difference gradient.
pub fn simulate_measurements(f: &ScalarField2D, acq: &Acquisition) -> Result<Measurements> {
    acq.validate()?;
    check_support(f)?;

    let n = f.nx();
    let h = f.spacing();
    let detectors: Vec<Detector> = (0..acq.n_theta)
        .map(|m| {
            let theta = 2.0 * PI * m as f64 / acq.n_theta as f64;
            let (sin, cos) = theta.sin_cos();
            let u = (acq.radius * cos + 1.0) / h;
            let v = (acq.radius * sin + 1.0) / h;
            let (i0, j0) = (u.floor(), v.floor());
            Detector {
                i0: i0 as isize,
                j0: j0 as isize,
                fx: u - i0,
                fy: v - j0,
                cos,
                sin,
            }
        })
        .collect();
    let lo = detectors.iter().map(|d| d.i0.min(d.j0)).min().unwrap() - 1;
    let hi = detectors.iter().map(|d| d.i0.max(d.j0)).max().unwrap() + 2;
    let window = Window {
        start: lo,
        len: (hi - lo + 1) as usize,
    };
    let margin = (lo.unsigned_abs().max((hi - n as isize + 1).unsigned_abs()) as f64) * h;

    let t_last = acq.t_final * (acq.n_t - 1) as f64 / acq.n_t as f64;
    let size = padded_size(n, h, t_last, margin);
    let spectral = SpectralBox::new(f, size);
    let dt = acq.time_step();
    let two_cos: Vec<f64> = spectral
        .wavenumber()
        .iter()
        .map(|k| 2.0 * (dt * k).cos())
        .collect();

    let blocks: Vec<(usize, usize)> = (0..acq.n_t)
        .step_by(BLOCK)
        .map(|s| (s, (s + BLOCK).min(acq.n_t)))
        .collect();
    let w = window.len;
    let sampled: Vec<(Vec<f64>, Vec<f64>)> = blocks
        .par_iter()
        .map_init(
            || {
                (
                    spectral.scratch(window),
                    vec![0.0; size * size],
                    vec![0.0; size * size],
                    vec![0.0; w * w],
                    vec![0.0; w * w],
                )
            },
            |(scratch, ca, cb, win_a, win_b), &(start, end)| {
                let len = end - start;
                let mut pressure = vec![0.0; acq.n_theta * len];
                let mut normal = vec![0.0; acq.n_theta * len];
                let (ta, tb) = (start as f64 * dt, (start + 1) as f64 * dt);
                for ((a, b), k) in ca.iter_mut().zip(cb.iter_mut()).zip(spectral.wavenumber()) {
                    *a = (ta * k).cos();
                    *b = (tb * k).cos();
                }
                let mut step = 0;
                while step < len {
                    let paired = step + 1 < len;
                    spectral.render(
                        ca,
                        paired.then_some(cb.as_slice()),
                        window,
                        scratch,
                        win_a,
                        paired.then_some(win_b.as_mut_slice()),
                    );
                    sample(
                        &detectors,
                        window,
                        h,
                        win_a,
                        step,
                        len,
                        &mut pressure,
                        &mut normal,
                    );
                    if paired {
                        sample(
                            &detectors,
                            window,
                            h,
                            win_b,
                            step + 1,
                            len,
                            &mut pressure,
                            &mut normal,
                        );
                    }
                    step += 2;
                    if step < len {
                        for ((a, b), c) in ca.iter_mut().zip(cb.iter()).zip(&two_cos) {
                            *a = c * b - *a;
                        }
                        for ((b, a), c) in cb.iter_mut().zip(ca.iter()).zip(&two_cos) {
                            *b = c * a - *b;
                        }
                    }
                }
                (pressure, normal)
            },
        )
        .collect();

    let mut pressure = vec![0.0; acq.n_theta * acq.n_t];
    let mut normal = vec![0.0; acq.n_theta * acq.n_t];
    for (&(start, end), (p, d)) in blocks.iter().zip(&sampled) {
        let len = end - start;
        for m in 0..acq.n_theta {
            let dst = m * acq.n_t + start;
            pressure[dst..dst + len].copy_from_slice(&p[m * len..(m + 1) * len]);
            normal[dst..dst + len].copy_from_slice(&d[m * len..(m + 1) * len]);
        }
    }
    let make = |weights, samples| {
        SensorData::new(
            acq.n_theta,
            acq.n_t,
            acq.radius,
            acq.t_final,
            weights,
            samples,
        )
    };
    Ok(Measurements {
        pressure: make((1.0, 0.0), pressure)?,
        normal_derivative: make((0.0, 1.0), normal)?,
    })
}

#[allow(clippy::too_many_arguments)]
fn sample(
    detectors: &[Detector],
    window: Window,
    h: f64,
    win: &[f64],
    step: usize,
    len: usize,
    pressure: &mut [f64],
    normal: &mut [f64],
) {
    let w = window.len;
    let at =
        |i: isize, j: isize| win[(j - window.start) as usize * w + (i - window.start) as usize];
    let inv = 0.5 / h;
    for (m, d) in detectors.iter().enumerate() {
        let mut p = 0.0;
        let mut gx = 0.0;
        let mut gy = 0.0;
        for (di, wx) in [(0, 1.0 - d.fx), (1, d.fx)] {
            for (dj, wy) in [(0, 1.0 - d.fy), (1, d.fy)] {
                let (i, j) = (d.i0 + di, d.j0 + dj);
                let wgt = wx * wy;
                p += wgt * at(i, j);
                gx += wgt * (at(i + 1, j) - at(i - 1, j)) * inv;
                gy += wgt * (at(i, j + 1) - at(i, j - 1)) * inv;
            }
        }
        pressure[m * len + step] = p;
        normal[m * len + step] = d.cos * gx + d.sin * gy;
    }
}

/// Samples of `c1 p + c2 dp/dn` on the detector circle for initial pressure `f`.
pub fn forward_operator(
    f: &ScalarField2D,
    c1: f64,
    c2: f64,
    acq: &Acquisition,
) -> Result<SensorData> {
    if !c1.is_finite() || !c2.is_finite() {
        return Err(WaveError::NonFinite);
    }
    Ok(simulate_measurements(f, acq)?.combine(c1, c2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavesim::kspace_step_solution;

    fn bump(n: usize, cx: f64, cy: f64) -> ScalarField2D {
        ScalarField2D::from_fn(n, |x, y| {
            let r2 = (x - cx).powi(2) + (y - cy).powi(2);
            (-r2 / (2.0 * 0.08 * 0.08)).exp()
        })
        .unwrap()
    }

    fn small() -> Acquisition {
        Acquisition {
            n_theta: 16,
            n_t: 150,
            t_final: 2.5,
            radius: 1.0,
        }
    }

    #[test]
    fn zero_field_gives_zero_data() {
        let f = ScalarField2D::zeros(41, 41).unwrap();
        let g = forward_operator(&f, 1.0, 1.0, &small()).unwrap();
        assert!(g.samples().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn recurrence_matches_direct_snapshots() {
        let f = bump(61, 0.2, -0.1);
        let acq = Acquisition {
            n_theta: 8,
            n_t: 140,
            t_final: 2.0,
            radius: 0.95,
        };
        let data = simulate_measurements(&f, &acq).unwrap();
        for n in [0, 1, 63, 64, 65, 101, 139] {
            let t = acq.t_final * n as f64 / acq.n_t as f64;
            let snap = &kspace_step_solution(&f, &[t]).unwrap()[0];
            let h = snap.spacing();
            for m in 0..acq.n_theta {
                let th = 2.0 * PI * m as f64 / acq.n_theta as f64;
                let (u, v) = ((0.95 * th.cos() + 1.0) / h, (0.95 * th.sin() + 1.0) / h);
                let (i, j) = (u.floor() as usize, v.floor() as usize);
                let (fx, fy) = (u - i as f64, v - j as f64);
                let p = (1.0 - fx) * (1.0 - fy) * snap.get(i, j)
                    + fx * (1.0 - fy) * snap.get(i + 1, j)
                    + (1.0 - fx) * fy * snap.get(i, j + 1)
                    + fx * fy * snap.get(i + 1, j + 1);
                let got = data.pressure.get(m, n);
                assert!((got - p).abs() < 1e-11, "m {m} n {n}: {got} vs {p}");
            }
        }
    }

    #[test]
    fn linear_in_weights_and_data() {
        let f1 = bump(41, 0.1, 0.0);
        let f2 = bump(41, -0.2, 0.2);
        let acq = small();
        let a = forward_operator(&f1, 1.0, 0.5, &acq).unwrap();
        let b = forward_operator(&f2, 1.0, 0.5, &acq).unwrap();
        let sum = forward_operator(&f1.combine(2.0, &f2, -3.0).unwrap(), 1.0, 0.5, &acq).unwrap();
        let lin = a.combine(2.0, &b, -3.0).unwrap();
        let scale = sum.samples().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (u, v) in sum.samples().iter().zip(lin.samples()) {
            assert!((u - v).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn wave_arrives_after_travel_time() {
        let f = bump(81, 0.0, 0.0);
        let acq = Acquisition {
            n_theta: 4,
            n_t: 200,
            t_final: 2.0,
            radius: 1.0,
        };
        let g = forward_operator(&f, 1.0, 0.0, &acq).unwrap();
        let peak = g.samples().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let trace = g.trace(0);
        let early: f64 = trace[..50].iter().fold(0.0, |m, v| m.max(v.abs()));
        let arrival = trace
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap()
            .0;
        assert!(early < 1e-6 * peak);
        assert!((g.time(arrival) - 1.0).abs() < 0.15);
    }

    #[test]
    fn rejects_invalid_requests() {
        let f = bump(41, 0.0, 0.0);
        let mut acq = small();
        acq.radius = 0.5;
        assert!(matches!(
            forward_operator(&f, 1.0, 0.0, &acq),
            Err(WaveError::InvalidAcquisition(_))
        ));
        acq = small();
        acq.n_t = 0;
        assert!(forward_operator(&f, 1.0, 0.0, &acq).is_err());
        assert!(forward_operator(&f, f64::NAN, 0.0, &small()).is_err());
    }
}
