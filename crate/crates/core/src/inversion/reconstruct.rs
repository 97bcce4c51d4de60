use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::{Formula, InversionError, ReconstructionConfig, Result};
use crate::harmonics::{angular_decompose, cosine_at_roots, sine_tweighted_at_roots};
use crate::specfun::{jn, BesselRootTable};
use crate::wavesim::{ScalarField2D, SensorData};

/// Reconstruction sampled on the polar grid `rho_i = R i / (n_rho - 1)`,
/// `phi_l = 2 pi l / n_phi`; `values[i * n_phi + l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarImage {
    n_rho: usize,
    n_phi: usize,
    radius: f64,
    values: Vec<f64>,
}

impl PolarImage {
    pub fn n_rho(&self) -> usize {
        self.n_rho
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn rho(&self, i: usize) -> f64 {
        self.radius * i as f64 / (self.n_rho - 1) as f64
    }

    pub fn phi(&self, l: usize) -> f64 {
        2.0 * PI * l as f64 / self.n_phi as f64
    }

    pub fn get(&self, i: usize, l: usize) -> f64 {
        self.values[i * self.n_phi + l]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Bilinear resampling onto the `n x n` node grid over `[-1, 1]^2`;
    /// nodes farther than `R` from the origin are set to zero.
    pub fn to_cartesian(&self, n: usize) -> ScalarField2D {
        let h = 2.0 / (n - 1) as f64;
        let drho = self.radius / (self.n_rho - 1) as f64;
        let dphi = 2.0 * PI / self.n_phi as f64;
        let mut values = vec![0.0; n * n];
        for j in 0..n {
            let y = -1.0 + j as f64 * h;
            for i in 0..n {
                let x = -1.0 + i as f64 * h;
                let rho = x.hypot(y);
                if rho > self.radius {
                    continue;
                }
                let u = rho / drho;
                let r0 = (u.floor() as usize).min(self.n_rho - 2);
                let fr = u - r0 as f64;
                let v = y.atan2(x).rem_euclid(2.0 * PI) / dphi;
                let p0 = (v.floor() as usize) % self.n_phi;
                let p1 = (p0 + 1) % self.n_phi;
                let fp = v - v.floor();
                values[j * n + i] = (1.0 - fr)
                    * ((1.0 - fp) * self.get(r0, p0) + fp * self.get(r0, p1))
                    + fr * ((1.0 - fp) * self.get(r0 + 1, p0) + fp * self.get(r0 + 1, p1));
            }
        }
        ScalarField2D::new(n, n, values).expect("finite polar image")
    }
}

/// A reconstruction operator for one detector count and config.
///
/// Holds the zero table and the weighted radial basis
/// `J_|k|(w[j,|k|] rho_i / R) / (w^p J_{|k|+1}(w)^3)` (`p = 2` for formula A,
/// `p = 1` for B), so repeated inversions only pay for the transforms and the
/// matrix-vector products.
pub struct Reconstructor {
    config: ReconstructionConfig,
    n_theta: usize,
    roots: Arc<BesselRootTable>,
    n_rho: usize,
    n_phi: usize,
    // basis[|k|][i * n_r + j]
    basis: Vec<Vec<f64>>,
}

impl Reconstructor {
    pub fn new(config: ReconstructionConfig, n_theta: usize) -> Result<Self> {
        config.validate()?;
        check_detectors(n_theta)?;
        let roots = BesselRootTable::cached(n_theta / 2, config.roots_per_order())?;
        Self::with_roots(config, n_theta, roots)
    }

    /// Uses a caller-provided zero table, which must cover orders up to
    /// `n_theta / 2` with `config.roots_per_order()` zeros each.
    pub fn with_roots(
        config: ReconstructionConfig,
        n_theta: usize,
        roots: Arc<BesselRootTable>,
    ) -> Result<Self> {
        config.validate()?;
        check_detectors(n_theta)?;
        let n_r = config.roots_per_order();
        if !roots.covers(n_theta / 2, n_r) {
            return Err(InversionError::Geometry(format!(
                "root table has orders <= {} with {} zeros, need orders <= {} with {n_r}",
                roots.max_order(),
                roots.roots_per_order(),
                n_theta / 2
            )));
        }
        let n_rho = config.grid();
        let n_phi = n_theta
            * ((PI * config.grid() as f64) / n_theta as f64)
                .ceil()
                .max(1.0) as usize;
        let power = match config.formula() {
            Formula::A => 2,
            Formula::B => 1,
        };

        let basis = (0..=n_theta / 2)
            .into_par_iter()
            .map(|k| {
                let zeros = &roots.order(k)[..n_r];
                let mut weights = Vec::with_capacity(n_r);
                for (j, &w) in zeros.iter().enumerate() {
                    let next = jn(k + 1, w);
                    if next.abs() <= 1e-8 {
                        return Err(InversionError::Numerical(format!(
                            "|J_{}(w[{},{k}])| = {next:e} too small",
                            k + 1,
                            j + 1
                        )));
                    }
                    weights.push(1.0 / (w.powi(power) * next.powi(3)));
                }
                let mut row = Vec::with_capacity(n_rho * n_r);
                for i in 0..n_rho {
                    let s = i as f64 / (n_rho - 1) as f64;
                    for (w, c) in zeros.iter().zip(&weights) {
                        row.push(jn(k, w * s) * c);
                    }
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Self {
            config,
            n_theta,
            roots,
            n_rho,
            n_phi,
            basis,
        })
    }

    pub fn config(&self) -> &ReconstructionConfig {
        &self.config
    }

    pub fn roots(&self) -> &Arc<BesselRootTable> {
        &self.roots
    }

    /// Reconstruction on the polar evaluation grid.
    pub fn invert_polar(&self, data: &SensorData) -> Result<PolarImage> {
        let cfg = &self.config;
        if data.n_theta() != self.n_theta {
            return Err(InversionError::Geometry(format!(
                "{} detectors, reconstructor built for {}",
                data.n_theta(),
                self.n_theta
            )));
        }
        if (data.radius() - cfg.radius()).abs() > 1e-12 * cfg.radius() {
            return Err(InversionError::Geometry(format!(
                "detector radius {} differs from configured {}",
                data.radius(),
                cfg.radius()
            )));
        }
        let mut spectrum = angular_decompose(data)?;
        if let Some(n) = cfg.time_samples() {
            if n > spectrum.n_t() {
                return Err(InversionError::Geometry(format!(
                    "config uses {n} time samples, data has {}",
                    spectrum.n_t()
                )));
            }
            spectrum = spectrum.truncated(n)?;
        }

        let (c1, c2) = cfg.weights();
        let r = cfg.radius();
        let norm = PI * (2.0 * PI).sqrt();
        let (coefficients, prefactor) = match cfg.formula() {
            Formula::A => (
                cosine_at_roots(&spectrum, &self.roots, r)?,
                -4.0 / (c2 * norm),
            ),
            Formula::B => (
                sine_tweighted_at_roots(&spectrum, &self.roots, r)?,
                4.0 / (c1 * r * r * norm),
            ),
        };

        let n_r = cfg.roots_per_order();
        let half = (self.n_theta / 2) as isize;
        let n_phi = self.n_phi;
        let fft = FftPlanner::new().plan_fft_inverse(n_phi);

        let rows: Vec<(Vec<f64>, f64, f64)> = (0..self.n_rho)
            .into_par_iter()
            .map_init(
                || vec![Complex64::default(); n_phi],
                |buf, i| {
                    buf.fill(Complex64::default());
                    for k in -half..half {
                        let c = &coefficients.order(k)[..n_r];
                        let b = &self.basis[k.unsigned_abs()][i * n_r..(i + 1) * n_r];
                        let a: Complex64 =
                            b.iter().zip(c).map(|(x, z)| z * x).sum::<Complex64>() * prefactor;
                        if k == -half {
                            buf[(n_phi as isize - half) as usize] += a * 0.5;
                            buf[half as usize] += a * 0.5;
                        } else {
                            buf[k.rem_euclid(n_phi as isize) as usize] += a;
                        }
                    }
                    fft.process(buf);
                    let re: Vec<f64> = buf.iter().map(|z| z.re).collect();
                    let max_re = re.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                    let max_im = buf.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
                    (re, max_re, max_im)
                },
            )
            .collect();

        let max_re = rows.iter().fold(0.0f64, |m, r| m.max(r.1));
        let max_im = rows.iter().fold(0.0f64, |m, r| m.max(r.2));
        if max_im > 1e-8 * max_re.max(f64::MIN_POSITIVE) {
            return Err(InversionError::Numerical(format!(
                "imaginary residue {max_im:e} exceeds 1e-8 of the image maximum {max_re:e}"
            )));
        }
        let mut values = Vec::with_capacity(self.n_rho * n_phi);
        for (row, _, _) in rows {
            values.extend(row);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(InversionError::Numerical(
                "non-finite reconstruction".into(),
            ));
        }
        Ok(PolarImage {
            n_rho: self.n_rho,
            n_phi,
            radius: r,
            values,
        })
    }

    /// Reconstruction on the configured Cartesian grid.
    pub fn invert(&self, data: &SensorData) -> Result<ScalarField2D> {
        Ok(self.invert_polar(data)?.to_cartesian(self.config.grid()))
    }
}

fn check_detectors(n_theta: usize) -> Result<()> {
    if n_theta == 0 || !n_theta.is_multiple_of(2) {
        return Err(InversionError::Geometry(format!(
            "detector count must be even and positive, got {n_theta}"
        )));
    }
    Ok(())
}

/// One-shot reconstruction with a given zero table.
pub fn invert(
    data: &SensorData,
    config: &ReconstructionConfig,
    roots: &BesselRootTable,
) -> Result<ScalarField2D> {
    Reconstructor::with_roots(config.clone(), data.n_theta(), Arc::new(roots.clone()))?.invert(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_roots;

    fn config(formula: Formula, c1: f64, c2: f64) -> ReconstructionConfig {
        ReconstructionConfig::new(formula, c1, c2)
            .unwrap()
            .with_roots(30)
            .unwrap()
            .with_grid(41)
            .unwrap()
    }

    #[test]
    fn zero_data_zero_image() {
        let g = SensorData::zeros(16, 200, 1.0, 6.0).unwrap();
        for (f, c1, c2) in [(Formula::A, 0.0, 1.0), (Formula::B, 1.0, 0.0)] {
            let rec = Reconstructor::new(config(f, c1, c2), 16).unwrap();
            assert_eq!(rec.invert(&g).unwrap().max_abs(), 0.0);
        }
    }

    #[test]
    fn geometry_checks() {
        let rec = Reconstructor::new(config(Formula::B, 1.0, 0.0), 16).unwrap();
        assert!(matches!(
            rec.invert(&SensorData::zeros(18, 20, 1.0, 6.0).unwrap()),
            Err(InversionError::Geometry(_))
        ));
        assert!(rec
            .invert(&SensorData::zeros(16, 20, 0.95, 6.0).unwrap())
            .is_err());
        let short = bessel_roots(7, 30).unwrap();
        let g = SensorData::zeros(16, 20, 1.0, 6.0).unwrap();
        assert!(invert(&g, &config(Formula::B, 1.0, 0.0), &short).is_err());
        assert!(Reconstructor::new(config(Formula::B, 1.0, 0.0), 15).is_err());
        let cfg = config(Formula::B, 1.0, 0.0)
            .with_time_samples(Some(21))
            .unwrap();
        assert!(Reconstructor::new(cfg, 16).unwrap().invert(&g).is_err());
    }

    #[test]
    fn single_term_oracle() {
        // For order k = 0 and zero j = 1, the formula-B term is
        // 4 / (pi sqrt(2 pi)) J_0(w rho) S / (w J_1(w)^3).
        let n_theta = 8;
        let n_t = 400;
        let t_final = 4.0;
        let mut g = vec![0.0; n_theta * n_t];
        for m in 0..n_theta {
            for n in 0..n_t {
                let t = t_final * n as f64 / n_t as f64;
                g[m * n_t + n] = (-(t - 1.5) * (t - 1.5) * 4.0).exp();
            }
        }
        let data = SensorData::new(n_theta, n_t, 1.0, t_final, (1.0, 0.0), g).unwrap();
        let cfg = ReconstructionConfig::new(Formula::B, 1.0, 0.0)
            .unwrap()
            .with_roots(1)
            .unwrap()
            .with_grid(11)
            .unwrap();
        let img = Reconstructor::new(cfg, n_theta)
            .unwrap()
            .invert_polar(&data)
            .unwrap();

        let w = bessel_roots(0, 1).unwrap().root(1, 0);
        let g0 = (2.0 * PI).sqrt();
        let dt = t_final / n_t as f64;
        let s: f64 = (0..n_t)
            .map(|n| {
                let t = n as f64 * dt;
                g0 * (-(t - 1.5) * (t - 1.5) * 4.0).exp() * t * (w * t).sin() * dt
            })
            .sum();
        let j1 = jn(1, w);
        for i in 0..img.n_rho() {
            let want =
                4.0 / (PI * (2.0 * PI).sqrt()) * jn(0, w * img.rho(i)) * s / (w * j1.powi(3));
            for l in 0..img.n_phi() {
                assert!((img.get(i, l) - want).abs() < 1e-12 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn detector_shift_rotates_image() {
        let n_theta = 12;
        let n_t = 150;
        let mut s = 12345u64;
        let samples = (0..n_theta * n_t)
            .map(|_| {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        let data = SensorData::new(n_theta, n_t, 1.0, 6.0, (0.0, 1.0), samples).unwrap();
        let rec = Reconstructor::new(config(Formula::A, 0.0, 1.0), n_theta).unwrap();
        let a = rec.invert_polar(&data).unwrap();
        let b = rec.invert_polar(&data.rotated(1)).unwrap();
        let step = a.n_phi() / n_theta;
        let scale = a.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..a.n_rho() {
            for l in 0..a.n_phi() {
                let shifted = a.get(i, (l + a.n_phi() - step) % a.n_phi());
                assert!((b.get(i, l) - shifted).abs() < 1e-10 * scale);
            }
        }
    }

    #[test]
    fn linear_in_data() {
        let n_theta = 8;
        let mk = |seed: u64| {
            let mut s = seed;
            let v = (0..n_theta * 100)
                .map(|_| {
                    s ^= s << 13;
                    s ^= s >> 7;
                    s ^= s << 17;
                    (s >> 11) as f64 / (1u64 << 53) as f64
                })
                .collect();
            SensorData::new(n_theta, 100, 1.0, 3.0, (1.0, 0.0), v).unwrap()
        };
        let (a, b) = (mk(1), mk(2));
        let rec = Reconstructor::new(config(Formula::B, 1.0, 0.0), n_theta).unwrap();
        let lhs = rec.invert(&a.combine(2.0, &b, -1.5).unwrap()).unwrap();
        let rhs = rec
            .invert(&a)
            .unwrap()
            .combine(2.0, &rec.invert(&b).unwrap(), -1.5)
            .unwrap();
        let err = lhs.combine(1.0, &rhs, -1.0).unwrap().max_abs();
        assert!(err < 1e-10 * lhs.max_abs());
    }
}
