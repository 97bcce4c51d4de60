use serde::{Deserialize, Serialize};

use super::{PhantomError, Result};
use crate::wavesim::{ScalarField2D, SUPPORT_RADIUS};

// Smoothed edges are treated as reaching this many widths past the sharp edge.
const TAIL_WIDTHS: f64 = 7.0;
// Simpson panels across the part of a smoothed edge that is integrated.
const PANELS: usize = 96;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
pub enum Primitive {
    Disk {
        center: [f64; 2],
        radius: f64,
        amplitude: f64,
    },
    Annulus {
        center: [f64; 2],
        r_in: f64,
        r_out: f64,
        amplitude: f64,
    },
}

impl Primitive {
    fn center(&self) -> [f64; 2] {
        match self {
            Primitive::Disk { center, .. } | Primitive::Annulus { center, .. } => *center,
        }
    }

    fn outer(&self) -> f64 {
        match self {
            Primitive::Disk { radius, .. } => *radius,
            Primitive::Annulus { r_out, .. } => *r_out,
        }
    }

    /// Area times amplitude.
    pub fn mass(&self) -> f64 {
        use std::f64::consts::PI;
        match self {
            Primitive::Disk {
                radius, amplitude, ..
            } => PI * radius * radius * amplitude,
            Primitive::Annulus {
                r_in,
                r_out,
                amplitude,
                ..
            } => PI * (r_out * r_out - r_in * r_in) * amplitude,
        }
    }
}

/// Sum of disks and annuli, optionally convolved with a Gaussian of
/// standard deviation `smoothing`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhantomSpec {
    pub primitives: Vec<Primitive>,
    #[serde(default)]
    pub smoothing: f64,
}

impl Default for PhantomSpec {
    /// Two overlapping disks, a ring and a small bright disk, smoothed
    /// with width 0.02.
    fn default() -> Self {
        Self {
            primitives: vec![
                Primitive::Disk {
                    center: [-0.25, 0.1],
                    radius: 0.3,
                    amplitude: 1.0,
                },
                Primitive::Disk {
                    center: [0.15, -0.2],
                    radius: 0.25,
                    amplitude: 0.7,
                },
                Primitive::Annulus {
                    center: [0.3, 0.35],
                    r_in: 0.1,
                    r_out: 0.18,
                    amplitude: 0.8,
                },
                Primitive::Disk {
                    center: [-0.35, -0.4],
                    radius: 0.08,
                    amplitude: 1.2,
                },
            ],
            smoothing: 0.02,
        }
    }
}

impl PhantomSpec {
    pub fn empty() -> Self {
        Self {
            primitives: Vec::new(),
            smoothing: 0.0,
        }
    }

    /// Checks shapes and that every primitive, including its smoothed
    /// edge, stays inside the solver's support disc.
    pub fn validate(&self) -> Result<()> {
        if !(self.smoothing >= 0.0 && self.smoothing.is_finite()) {
            return Err(PhantomError::Invalid(format!(
                "smoothing width must be finite and non-negative, got {}",
                self.smoothing
            )));
        }
        for (index, p) in self.primitives.iter().enumerate() {
            let [cx, cy] = p.center();
            let ok = match *p {
                Primitive::Disk {
                    radius, amplitude, ..
                } => radius > 0.0 && radius.is_finite() && amplitude.is_finite(),
                Primitive::Annulus {
                    r_in,
                    r_out,
                    amplitude,
                    ..
                } => r_in >= 0.0 && r_out > r_in && r_out.is_finite() && amplitude.is_finite(),
            };
            if !ok || !cx.is_finite() || !cy.is_finite() {
                return Err(PhantomError::Invalid(format!(
                    "primitive {index} has invalid geometry or amplitude"
                )));
            }
            let reach = cx.hypot(cy) + p.outer() + TAIL_WIDTHS * self.smoothing;
            if reach > SUPPORT_RADIUS {
                return Err(PhantomError::Support {
                    index,
                    reach,
                    limit: SUPPORT_RADIUS,
                });
            }
        }
        Ok(())
    }

    /// The same phantom rotated by `angle` radians about the origin.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let turn = |[x, y]: [f64; 2]| [c * x - s * y, s * x + c * y];
        let primitives = self
            .primitives
            .iter()
            .map(|p| match *p {
                Primitive::Disk {
                    center,
                    radius,
                    amplitude,
                } => Primitive::Disk {
                    center: turn(center),
                    radius,
                    amplitude,
                },
                Primitive::Annulus {
                    center,
                    r_in,
                    r_out,
                    amplitude,
                } => Primitive::Annulus {
                    center: turn(center),
                    r_in,
                    r_out,
                    amplitude,
                },
            })
            .collect();
        Self {
            primitives,
            smoothing: self.smoothing,
        }
    }

    pub fn mass(&self) -> f64 {
        self.primitives.iter().map(Primitive::mass).sum()
    }

    /// Value at a point.
    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.primitives
            .iter()
            .map(|p| {
                let [cx, cy] = p.center();
                let d = (x - cx).hypot(y - cy);
                match *p {
                    Primitive::Disk {
                        radius, amplitude, ..
                    } => amplitude * disk_profile(d, radius, self.smoothing),
                    Primitive::Annulus {
                        r_in,
                        r_out,
                        amplitude,
                        ..
                    } => {
                        amplitude
                            * (disk_profile(d, r_out, self.smoothing)
                                - disk_profile(d, r_in, self.smoothing))
                    }
                }
            })
            .sum()
    }
}

/// Samples the phantom on the `n x n` node grid over `[-1, 1]^2`.
pub fn rasterize(spec: &PhantomSpec, n: usize) -> Result<ScalarField2D> {
    spec.validate()?;
    ScalarField2D::from_fn(n, |x, y| spec.value(x, y))
        .map_err(|e| PhantomError::Invalid(e.to_string()))
}

/// Indicator of the disc of radius `r` convolved with a centred Gaussian of
/// width `sigma`, at distance `d` from the centre:
/// `int_0^r (rho / sigma^2) exp(-(rho^2 + d^2) / (2 sigma^2)) I_0(rho d / sigma^2) d rho`.
fn disk_profile(d: f64, r: f64, sigma: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    if sigma == 0.0 {
        return if d <= r { 1.0 } else { 0.0 };
    }
    let reach = 8.0 * sigma;
    if d - reach > r {
        return 0.0;
    }
    if d + reach <= r {
        return 1.0;
    }
    let lo = (d - reach).max(0.0);
    let hi = (d + reach).min(r);
    let s2 = sigma * sigma;
    let integrand =
        |rho: f64| rho / s2 * (-(rho - d) * (rho - d) / (2.0 * s2)).exp() * scaled_i0(rho * d / s2);
    let step = (hi - lo) / PANELS as f64;
    let mut sum = integrand(lo) + integrand(hi);
    for i in 1..PANELS {
        sum += integrand(lo + i as f64 * step) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * step / 3.0
}

/// `exp(-x) I_0(x)` for `x >= 0`.
fn scaled_i0(x: f64) -> f64 {
    if x < 25.0 {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut m = 1.0;
        while term > 1e-17 * sum {
            term *= q / (m * m);
            sum += term;
            m += 1.0;
        }
        sum * (-x).exp()
    } else {
        let z = 8.0 * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..12 {
            let a = (2 * m - 1) as f64;
            term *= a * a / (m as f64 * z);
            sum += term;
        }
        sum / (2.0 * std::f64::consts::PI * x).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn scaled_bessel_is_continuous_and_accurate() {
        // I_0(1) = 1.2660658777520082
        assert!((scaled_i0(1.0) - 1.2660658777520082 * (-1.0f64).exp()).abs() < 1e-15);
        let below = scaled_i0(25.0 - 1e-12);
        let above = scaled_i0(25.0);
        assert!((below - above).abs() < 1e-13 * above);
        assert_eq!(scaled_i0(0.0), 1.0);
    }

    #[test]
    fn empty_spec_is_zero() {
        let f = rasterize(&PhantomSpec::empty(), 21).unwrap();
        assert_eq!(f.max_abs(), 0.0);
    }

    #[test]
    fn sharp_disk_is_an_indicator() {
        let spec = PhantomSpec {
            primitives: vec![Primitive::Disk {
                center: [0.0, 0.0],
                radius: 0.3,
                amplitude: 1.0,
            }],
            smoothing: 0.0,
        };
        let f = rasterize(&spec, 101).unwrap();
        for j in 0..101 {
            for i in 0..101 {
                let r = f.coord(i).hypot(f.coord(j));
                assert_eq!(f.get(i, j), (r <= 0.3) as u8 as f64);
            }
        }
    }

    #[test]
    fn smoothing_preserves_mass() {
        let spec = PhantomSpec::default();
        spec.validate().unwrap();
        let n = 281;
        let f = rasterize(&spec, n).unwrap();
        let h = f.spacing();
        let mass: f64 = f.values().iter().sum::<f64>() * h * h;
        assert!(
            (mass - spec.mass()).abs() < 0.01 * spec.mass(),
            "{mass} vs {}",
            spec.mass()
        );
    }

    #[test]
    fn smoothed_profile_matches_sharp_far_from_edge() {
        assert!((disk_profile(0.0, 0.3, 0.02) - 1.0).abs() < 1e-12);
        assert!(disk_profile(0.5, 0.3, 0.02).abs() < 1e-12);
        // on a straight edge the value is 1/2; curvature lowers it slightly
        let edge = disk_profile(0.3, 0.3, 0.02);
        assert!(edge < 0.5 && edge > 0.45, "{edge}");
    }

    #[test]
    fn support_is_enforced() {
        let spec = PhantomSpec {
            primitives: vec![Primitive::Disk {
                center: [0.5, 0.0],
                radius: 0.3,
                amplitude: 1.0,
            }],
            smoothing: 0.02,
        };
        assert!(matches!(
            rasterize(&spec, 21),
            Err(PhantomError::Support { index: 0, .. })
        ));
        let bad = PhantomSpec {
            primitives: vec![Primitive::Annulus {
                center: [0.0, 0.0],
                r_in: 0.2,
                r_out: 0.1,
                amplitude: 1.0,
            }],
            smoothing: 0.0,
        };
        assert!(matches!(bad.validate(), Err(PhantomError::Invalid(_))));
    }

    #[test]
    fn rotation_moves_centres() {
        let spec = PhantomSpec::default().rotated(PI / 2.0);
        let a = PhantomSpec::default();
        assert!((spec.value(-0.1, -0.25) - a.value(-0.25, 0.1)).abs() < 1e-12);
    }

    #[test]
    fn serde_round_trip() {
        let spec = PhantomSpec::default();
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"shape\":\"annulus\""));
        let back: PhantomSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
