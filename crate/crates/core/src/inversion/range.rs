use crate::harmonics::{angular_decompose, cosine_at_roots, cosine_transform};
use crate::specfun::BesselRootTable;
use crate::wavesim::SensorData;

use super::{InversionError, Result};

/// Normalised range-condition defect of pressure data.
///
/// Returns `max |C{g_k}(w[j,|k|] / R)|` over the table divided by the
/// largest `|C{g_k}(lambda)|` over a reference grid that contains the same
/// zeros together with the midpoints between consecutive zeros (and between
/// 0 and the first zero). Ideal pressure data give 0; data violating the
/// condition give values of order one. All-zero data give 0.
pub fn range_residual(data: &SensorData, roots: &BesselRootTable) -> Result<f64> {
    let spectrum = angular_decompose(data)?;
    let radius = data.radius();
    let at_roots = cosine_at_roots(&spectrum, roots, radius)?;
    let numerator = at_roots
        .values()
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm()));

    let mut reference = numerator;
    for k in spectrum.orders() {
        let trace = spectrum.order(k);
        let zeros = roots.order(k.unsigned_abs());
        let mut prev = 0.0;
        for &w in zeros {
            let mid = 0.5 * (prev + w) / radius;
            reference = reference.max(cosine_transform(trace, spectrum.t_final(), mid).norm());
            prev = w;
        }
    }
    if reference == 0.0 {
        return Ok(0.0);
    }
    let value = numerator / reference;
    if !value.is_finite() {
        return Err(InversionError::Numerical(
            "non-finite range residual".into(),
        ));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_roots;

    #[test]
    fn zero_data_gives_zero() {
        let g = SensorData::zeros(8, 50, 1.0, 2.0).unwrap();
        let roots = bessel_roots(4, 5).unwrap();
        assert_eq!(range_residual(&g, &roots).unwrap(), 0.0);
    }

    #[test]
    fn noise_violates_the_condition() {
        let mut s = 0x9e3779b97f4a7c15u64;
        let samples = (0..16 * 400)
            .map(|_| {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        let g = SensorData::new(16, 400, 1.0, 6.0, (1.0, 0.0), samples).unwrap();
        let roots = bessel_roots(8, 20).unwrap();
        let r = range_residual(&g, &roots).unwrap();
        assert!(r > 0.3 && r <= 1.0, "{r}");
    }

    #[test]
    fn needs_enough_orders() {
        let g = SensorData::zeros(8, 10, 1.0, 1.0).unwrap();
        assert!(range_residual(&g, &bessel_roots(3, 2).unwrap()).is_err());
    }
}
