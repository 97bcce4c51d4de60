use super::{PhantomError, Result};
use crate::wavesim::{ScalarField2D, SensorData};

/// Outcome of [`relative_error`]. When the truth vanishes on the disc the
/// absolute norm of the difference is returned with `normalized = false`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeError {
    pub value: f64,
    pub normalized: bool,
}

/// `||f - f_rec||_2 / ||f||_2` over the grid nodes inside the unit disc.
pub fn relative_error(
    reconstruction: &ScalarField2D,
    truth: &ScalarField2D,
) -> Result<RelativeError> {
    if !reconstruction.same_grid(truth) {
        return Err(PhantomError::Mismatch);
    }
    let n = truth.nx();
    let mut diff = 0.0;
    let mut norm = 0.0;
    for j in 0..n {
        let y = truth.coord(j);
        for i in 0..n {
            if truth.coord(i).hypot(y) > 1.0 {
                continue;
            }
            let t = truth.get(i, j);
            let d = t - reconstruction.get(i, j);
            diff += d * d;
            norm += t * t;
        }
    }
    Ok(if norm > 0.0 {
        RelativeError {
            value: (diff / norm).sqrt(),
            normalized: true,
        }
    } else {
        RelativeError {
            value: diff.sqrt(),
            normalized: false,
        }
    })
}

/// `||noisy - clean|| / ||clean||` over all samples.
pub fn data_error(noisy: &SensorData, clean: &SensorData) -> Result<f64> {
    if !noisy.same_geometry(clean) {
        return Err(PhantomError::Mismatch);
    }
    let mut diff = 0.0;
    let mut norm = 0.0;
    for (a, b) in noisy.samples().iter().zip(clean.samples()) {
        diff += (a - b) * (a - b);
        norm += b * b;
    }
    Ok(if norm > 0.0 {
        (diff / norm).sqrt()
    } else {
        diff.sqrt()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blob() -> ScalarField2D {
        ScalarField2D::from_fn(31, |x, y| (1.0 - x * x - y * y).max(0.0) + 0.3 * x).unwrap()
    }

    #[test]
    fn trivial_values() {
        let f = blob();
        let zero = ScalarField2D::zeros(31, 31).unwrap();
        assert_eq!(relative_error(&f, &f).unwrap().value, 0.0);
        assert!((relative_error(&zero, &f).unwrap().value - 1.0).abs() < 1e-15);
        assert!((relative_error(&f.scaled(0.5), &f).unwrap().value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ignores_outside_of_disc() {
        let f = blob();
        let mut v = f.clone().into_values();
        v[0] += 100.0;
        let g = ScalarField2D::new(31, 31, v).unwrap();
        assert_eq!(relative_error(&g, &f).unwrap().value, 0.0);
    }

    #[test]
    fn zero_truth_is_flagged() {
        let zero = ScalarField2D::zeros(31, 31).unwrap();
        let e = relative_error(&blob(), &zero).unwrap();
        assert!(!e.normalized && e.value > 0.0);
        assert!(relative_error(&zero, &ScalarField2D::zeros(5, 5).unwrap()).is_err());
    }
}
