use std::f64::consts::PI;

use super::{Result, WaveError};

/// Sinogram `g[m, n]` recorded by `n_theta` detectors on the circle of
/// radius `radius` at `n_t` times.
///
/// Detector `m` (0-based) sits at angle `2 pi m / n_theta`; sample `n`
/// (0-based) is taken at `t_n = t_final * n / n_t`. `c1, c2` record the
/// data model `c1 p + c2 dp/dn` the samples follow. Samples are stored
/// detector-major: `samples[m * n_t + n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorData {
    n_theta: usize,
    n_t: usize,
    radius: f64,
    t_final: f64,
    c1: f64,
    c2: f64,
    samples: Vec<f64>,
}

impl SensorData {
    pub fn new(
        n_theta: usize,
        n_t: usize,
        radius: f64,
        t_final: f64,
        (c1, c2): (f64, f64),
        samples: Vec<f64>,
    ) -> Result<Self> {
        if n_theta == 0 || n_t == 0 {
            return Err(WaveError::InvalidAcquisition(format!(
                "detector and time counts must be positive, got {n_theta} x {n_t}"
            )));
        }
        if !(radius > 0.0 && radius.is_finite()) || !(t_final > 0.0 && t_final.is_finite()) {
            return Err(WaveError::InvalidAcquisition(format!(
                "radius and final time must be positive, got R = {radius}, T = {t_final}"
            )));
        }
        if !c1.is_finite() || !c2.is_finite() {
            return Err(WaveError::NonFinite);
        }
        if samples.len() != n_theta * n_t {
            return Err(WaveError::InvalidAcquisition(format!(
                "{} samples for {n_theta} x {n_t} sinogram",
                samples.len()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(WaveError::NonFinite);
        }
        Ok(Self {
            n_theta,
            n_t,
            radius,
            t_final,
            c1,
            c2,
            samples,
        })
    }

    pub fn zeros(n_theta: usize, n_t: usize, radius: f64, t_final: f64) -> Result<Self> {
        Self::new(
            n_theta,
            n_t,
            radius,
            t_final,
            (0.0, 0.0),
            vec![0.0; n_theta * n_t],
        )
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn weights(&self) -> (f64, f64) {
        (self.c1, self.c2)
    }

    pub fn time_step(&self) -> f64 {
        self.t_final / self.n_t as f64
    }

    pub fn angle(&self, m: usize) -> f64 {
        2.0 * PI * m as f64 / self.n_theta as f64
    }

    pub fn time(&self, n: usize) -> f64 {
        self.t_final * n as f64 / self.n_t as f64
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.samples[m * self.n_t + n]
    }

    /// Time trace of detector `m`.
    pub fn trace(&self, m: usize) -> &[f64] {
        &self.samples[m * self.n_t..(m + 1) * self.n_t]
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// `(sum |g|^2 / (n_theta n_t))^(1/2)`, the per-sample RMS norm.
    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(|v| v * v).sum::<f64>() / self.samples.len() as f64).sqrt()
    }

    pub fn same_geometry(&self, other: &Self) -> bool {
        self.n_theta == other.n_theta
            && self.n_t == other.n_t
            && self.radius == other.radius
            && self.t_final == other.t_final
    }

    /// `a * self + b * other`; weights combine the same way.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if !self.same_geometry(other) {
            return Err(WaveError::InvalidAcquisition(
                "sinogram geometries differ".into(),
            ));
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(u, v)| a * u + b * v)
            .collect();
        Self::new(
            self.n_theta,
            self.n_t,
            self.radius,
            self.t_final,
            (a * self.c1 + b * other.c1, a * self.c2 + b * other.c2),
            samples,
        )
    }

    /// Same geometry and weights with new samples.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        Self::new(
            self.n_theta,
            self.n_t,
            self.radius,
            self.t_final,
            (self.c1, self.c2),
            samples,
        )
    }

    /// Keeps the first `n_keep` time samples; `t_final` shrinks accordingly
    /// so the time grid is unchanged.
    pub fn truncated(&self, n_keep: usize) -> Result<Self> {
        if n_keep == 0 || n_keep > self.n_t {
            return Err(WaveError::InvalidAcquisition(format!(
                "cannot keep {n_keep} of {} time samples",
                self.n_t
            )));
        }
        let mut samples = Vec::with_capacity(self.n_theta * n_keep);
        for m in 0..self.n_theta {
            samples.extend_from_slice(&self.trace(m)[..n_keep]);
        }
        Self::new(
            self.n_theta,
            n_keep,
            self.radius,
            self.time(n_keep),
            (self.c1, self.c2),
            samples,
        )
    }

    /// Cyclic shift along the detector axis: detector `m` of the result
    /// holds what detector `m - shift` recorded.
    pub fn rotated(&self, shift: usize) -> Self {
        let mut samples = vec![0.0; self.samples.len()];
        for m in 0..self.n_theta {
            let dst = (m + shift) % self.n_theta;
            samples[dst * self.n_t..(dst + 1) * self.n_t].copy_from_slice(self.trace(m));
        }
        Self {
            samples,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> SensorData {
        let s = (0..12).map(|v| v as f64).collect();
        SensorData::new(3, 4, 1.0, 2.0, (1.0, 0.0), s).unwrap()
    }

    #[test]
    fn sampling_grid() {
        let g = ramp();
        assert_eq!(g.time(0), 0.0);
        assert_eq!(g.time(3), 1.5);
        assert!((g.angle(1) - 2.0 * PI / 3.0).abs() < 1e-15);
        assert_eq!(g.get(2, 1), 9.0);
    }

    #[test]
    fn truncation_keeps_time_grid() {
        let g = ramp().truncated(2).unwrap();
        assert_eq!(g.n_t(), 2);
        assert_eq!(g.t_final(), 1.0);
        assert_eq!(g.time_step(), 0.5);
        assert_eq!(g.trace(1), &[4.0, 5.0]);
        assert!(ramp().truncated(0).is_err());
        assert!(ramp().truncated(5).is_err());
    }

    #[test]
    fn rotation_is_cyclic() {
        let g = ramp().rotated(1);
        assert_eq!(g.trace(1), ramp().trace(0));
        assert_eq!(g.trace(0), ramp().trace(2));
        assert_eq!(ramp().rotated(3), ramp());
    }

    #[test]
    fn normalized_norm() {
        let g = SensorData::new(2, 2, 1.0, 1.0, (1.0, 0.0), vec![1.0, -1.0, 1.0, -1.0]).unwrap();
        assert_eq!(g.l2_norm(), 1.0);
    }

    #[test]
    fn combine_tracks_weights() {
        let p = ramp();
        let d = SensorData::new(3, 4, 1.0, 2.0, (0.0, 1.0), vec![1.0; 12]).unwrap();
        let m = p.combine(2.0, &d, 3.0).unwrap();
        assert_eq!(m.weights(), (2.0, 3.0));
        assert_eq!(m.get(0, 1), 2.0 + 3.0);
    }
}
