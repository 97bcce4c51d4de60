use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{HarmonicsError, Result};
use crate::wavesim::SensorData;

/// Angular Fourier coefficients `g_k[n]` of a sinogram for
/// `k = -n_theta/2 .. n_theta/2 - 1`.
///
/// Normalised as the discretisation of
/// `g_k(t) = (2 pi)^(-1/2) \int g(theta, t) e^{-ik theta} d theta` with
/// quadrature weight `2 pi / n_theta`, so that
/// `sum_k sum_n |g_k[n]|^2 = (2 pi / n_theta) sum_m sum_n |g[m, n]|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSpectrum {
    n_theta: usize,
    n_t: usize,
    t_final: f64,
    radius: f64,
    // order-major: coeffs[(k + n_theta/2) * n_t + n]
    coeffs: Vec<Complex64>,
}

/// FFT over the detector axis with the normalisation described on
/// [`HarmonicSpectrum`].
pub fn angular_decompose(data: &SensorData) -> Result<HarmonicSpectrum> {
    let n_theta = data.n_theta();
    if !n_theta.is_multiple_of(2) {
        return Err(HarmonicsError::OddDetectorCount(n_theta));
    }
    let n_t = data.n_t();
    let fft = FftPlanner::new().plan_fft_forward(n_theta);
    let mut rows = vec![Complex64::default(); n_theta * n_t];
    for m in 0..n_theta {
        for (n, v) in data.trace(m).iter().enumerate() {
            rows[n * n_theta + m] = Complex64::new(*v, 0.0);
        }
    }
    fft.process(&mut rows);

    let scale = (2.0 * PI).sqrt() / n_theta as f64;
    let half = n_theta / 2;
    let mut coeffs = vec![Complex64::default(); n_theta * n_t];
    for o in 0..n_theta {
        let bin = (o + half) % n_theta;
        for n in 0..n_t {
            coeffs[o * n_t + n] = rows[n * n_theta + bin] * scale;
        }
    }
    Ok(HarmonicSpectrum {
        n_theta,
        n_t,
        t_final: data.t_final(),
        radius: data.radius(),
        coeffs,
    })
}

impl HarmonicSpectrum {
    /// Builds a spectrum from order-major coefficients.
    pub fn new(
        n_theta: usize,
        n_t: usize,
        t_final: f64,
        radius: f64,
        coeffs: Vec<Complex64>,
    ) -> Result<Self> {
        if n_theta == 0 || !n_theta.is_multiple_of(2) {
            return Err(HarmonicsError::OddDetectorCount(n_theta));
        }
        if n_t == 0 || coeffs.len() != n_theta * n_t {
            return Err(HarmonicsError::Invalid(format!(
                "{} coefficients for {n_theta} orders x {n_t} samples",
                coeffs.len()
            )));
        }
        if !(t_final > 0.0 && t_final.is_finite() && radius > 0.0 && radius.is_finite()) {
            return Err(HarmonicsError::Invalid(format!(
                "need positive T and R, got T = {t_final}, R = {radius}"
            )));
        }
        if coeffs
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(HarmonicsError::Invalid("non-finite coefficient".into()));
        }
        Ok(Self {
            n_theta,
            n_t,
            t_final,
            radius,
            coeffs,
        })
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn min_order(&self) -> isize {
        -((self.n_theta / 2) as isize)
    }

    pub fn max_order(&self) -> isize {
        (self.n_theta / 2) as isize - 1
    }

    pub fn orders(&self) -> impl Iterator<Item = isize> {
        self.min_order()..=self.max_order()
    }

    /// Time series `g_k[n]`.
    ///
    /// # Panics
    /// If `k` is outside [`Self::min_order`]..=[`Self::max_order`].
    pub fn order(&self, k: isize) -> &[Complex64] {
        let o = (k - self.min_order()) as usize;
        assert!(o < self.n_theta, "order {k} out of range");
        &self.coeffs[o * self.n_t..(o + 1) * self.n_t]
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Keeps the first `n_keep` time samples of every order.
    pub fn truncated(&self, n_keep: usize) -> Result<Self> {
        if n_keep == 0 || n_keep > self.n_t {
            return Err(HarmonicsError::Invalid(format!(
                "cannot keep {n_keep} of {} time samples",
                self.n_t
            )));
        }
        let mut coeffs = Vec::with_capacity(self.n_theta * n_keep);
        for o in 0..self.n_theta {
            coeffs.extend_from_slice(&self.coeffs[o * self.n_t..o * self.n_t + n_keep]);
        }
        Ok(Self {
            n_theta: self.n_theta,
            n_t: n_keep,
            t_final: self.t_final * n_keep as f64 / self.n_t as f64,
            radius: self.radius,
            coeffs,
        })
    }

    /// `g[m, n] = (2 pi)^(-1/2) sum_k g_k[n] e^{ik theta_m}`, the inverse of
    /// [`angular_decompose`]. The imaginary part, which vanishes for spectra
    /// of real data, is dropped.
    pub fn synthesize(&self, weights: (f64, f64)) -> SensorData {
        let n_theta = self.n_theta;
        let n_t = self.n_t;
        let half = n_theta / 2;
        let fft = FftPlanner::new().plan_fft_inverse(n_theta);
        let mut rows = vec![Complex64::default(); n_theta * n_t];
        for o in 0..n_theta {
            let bin = (o + half) % n_theta;
            for n in 0..n_t {
                rows[n * n_theta + bin] = self.coeffs[o * n_t + n];
            }
        }
        fft.process(&mut rows);
        let scale = 1.0 / (2.0 * PI).sqrt();
        let mut samples = vec![0.0; n_theta * n_t];
        for m in 0..n_theta {
            for n in 0..n_t {
                samples[m * n_t + n] = rows[n * n_theta + m].re * scale;
            }
        }
        SensorData::new(n_theta, n_t, self.radius, self.t_final, weights, samples)
            .expect("finite spectrum synthesizes finite data")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noise(n_theta: usize, n_t: usize, seed: u64) -> SensorData {
        let mut s = seed;
        let samples = (0..n_theta * n_t)
            .map(|_| {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        SensorData::new(n_theta, n_t, 1.0, 2.0, (1.0, 0.0), samples).unwrap()
    }

    #[test]
    fn constant_excites_order_zero() {
        let g = SensorData::new(8, 3, 1.0, 1.0, (1.0, 0.0), vec![1.0; 24]).unwrap();
        let s = angular_decompose(&g).unwrap();
        for k in s.orders() {
            for z in s.order(k) {
                let want = if k == 0 { (2.0 * PI).sqrt() } else { 0.0 };
                assert!((z - Complex64::new(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn single_mode_and_conjugate_symmetry() {
        let (nt, nth) = (5, 12);
        let mut samples = vec![0.0; nt * nth];
        for m in 0..nth {
            for n in 0..nt {
                samples[m * nt + n] = (2.0 * PI * m as f64 / nth as f64).cos() * (n as f64 + 1.0);
            }
        }
        let s =
            angular_decompose(&SensorData::new(nth, nt, 1.0, 1.0, (1.0, 0.0), samples).unwrap())
                .unwrap();
        for k in s.orders() {
            let e: f64 = s.order(k).iter().map(|z| z.norm()).sum();
            assert_eq!(e > 1e-12, k.abs() == 1, "k = {k}");
        }
        let g = noise(10, 7, 3);
        let s = angular_decompose(&g).unwrap();
        for k in 1..5 {
            for (a, b) in s.order(k).iter().zip(s.order(-k)) {
                assert!((a - b.conj()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn matches_direct_summation() {
        let g = noise(6, 4, 11);
        let s = angular_decompose(&g).unwrap();
        for k in s.orders() {
            for n in 0..4 {
                let mut want = Complex64::default();
                for m in 0..6 {
                    let th = g.angle(m);
                    want += g.get(m, n) * Complex64::from_polar(1.0, -(k as f64) * th);
                }
                want *= (2.0 * PI).sqrt() / 6.0;
                assert!((s.order(k)[n] - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn parseval_and_round_trip() {
        let g = noise(30, 17, 7);
        let s = angular_decompose(&g).unwrap();
        let direct: f64 = g.samples().iter().map(|v| v * v).sum::<f64>() * 2.0 * PI / 30.0;
        assert!((s.energy() - direct).abs() <= 1e-12 * direct);
        let back = s.synthesize((1.0, 0.0));
        let err: f64 = back
            .samples()
            .iter()
            .zip(g.samples())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(err <= 1e-12 * g.l2_norm() * (g.samples().len() as f64).sqrt());
    }

    #[test]
    fn rejects_odd_detector_count() {
        assert_eq!(
            angular_decompose(&noise(7, 3, 1)),
            Err(HarmonicsError::OddDetectorCount(7))
        );
    }

    #[test]
    fn truncation_shortens_time_axis() {
        let s = angular_decompose(&noise(4, 10, 5)).unwrap();
        let t = s.truncated(4).unwrap();
        assert_eq!(t.n_t(), 4);
        assert!((t.t_final() - 0.8).abs() < 1e-15);
        assert_eq!(t.order(-2), &s.order(-2)[..4]);
        assert!(s.truncated(11).is_err());
    }
}
