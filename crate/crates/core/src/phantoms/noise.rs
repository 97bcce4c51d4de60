use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{PhantomError, Result};
use crate::wavesim::SensorData;

/// Adds white Gaussian noise whose standard deviation is `percent / 100`
/// times the RMS norm `(sum g^2 / (n_theta n_t))^(1/2)` of the data.
///
/// Draws are reproducible from `seed`; `percent = 0` returns the data
/// unchanged.
pub fn add_noise(data: &SensorData, percent: f64, seed: u64) -> Result<SensorData> {
    if !(percent >= 0.0 && percent.is_finite()) {
        return Err(PhantomError::NoiseLevel(percent));
    }
    let std = percent / 100.0 * data.l2_norm();
    if std == 0.0 {
        return Ok(data.clone());
    }
    let normal = Normal::new(0.0, std).map_err(|_| PhantomError::NoiseLevel(percent))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = data
        .samples()
        .iter()
        .map(|v| v + normal.sample(&mut rng))
        .collect();
    data.with_samples(samples)
        .map_err(|e| PhantomError::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(n_theta: usize, n_t: usize) -> SensorData {
        let s = (0..n_theta * n_t)
            .map(|i| ((i % 37) as f64 - 18.0) / 7.0)
            .collect();
        SensorData::new(n_theta, n_t, 1.0, 6.0, (1.0, 0.0), s).unwrap()
    }

    #[test]
    fn zero_percent_is_identity() {
        let g = ramp(4, 10);
        assert_eq!(add_noise(&g, 0.0, 1).unwrap(), g);
    }

    #[test]
    fn rejects_bad_levels() {
        let g = ramp(2, 2);
        assert_eq!(add_noise(&g, -1.0, 0), Err(PhantomError::NoiseLevel(-1.0)));
        assert!(add_noise(&g, f64::INFINITY, 0).is_err());
    }

    #[test]
    fn seeded_and_calibrated() {
        let g = ramp(300, 400);
        let a = add_noise(&g, 50.0, 7).unwrap();
        assert_eq!(a, add_noise(&g, 50.0, 7).unwrap());
        let b = add_noise(&g, 50.0, 8).unwrap();
        assert_ne!(a, b);
        for noisy in [a, b] {
            let diff = noisy.combine(1.0, &g, -1.0).unwrap();
            let ratio = diff.l2_norm() / g.l2_norm();
            assert!((ratio - 0.5).abs() < 0.01, "{ratio}");
        }
    }
}
