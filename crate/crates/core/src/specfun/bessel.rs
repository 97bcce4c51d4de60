use std::f64::consts::PI;

use super::{Result, SpecFunError};

/// Largest order accepted by [`bessel_j`].
pub const MAX_ORDER: usize = 1024;

/// Below this argument the ascending series loses at most ~3 digits to
/// cancellation.
const SERIES_LIMIT: f64 = 8.0;

/// Hankel's expansion is used once `x >= max(ASYMPTOTIC_MIN, (k + 1)^2)`.
const ASYMPTOTIC_MIN: f64 = 25.0;

/// Upward recurrence from `J_0, J_1` is stable while `k` stays this fraction
/// below the turning point `k = x`.
const UPWARD_FRACTION: f64 = 0.8;

const RESCALE_ABOVE: f64 = 1.0e250;
const RESCALE_BY: f64 = 1.0e-250;

/// `J_order(x)` for integer `order >= 0` and real `x >= 0`.
///
/// Absolute accuracy is about `1e-13` for `order <= 256` and `x <= 2000`.
/// Regimes: the ascending power series for small `x` (or `x^2 < 4(k+1)`,
/// where the series terms decrease from the first one), Hankel's
/// large-argument expansion for `x >= max(25, (k+1)^2)`, upward recurrence
/// from Hankel's `J_0, J_1` when `x >= 25` and `k + 1 <= 0.8 x`, and
/// Miller's downward recurrence normalized by `1 = J_0 + 2 (J_2 + J_4 + ...)`
/// everywhere else.
pub fn bessel_j(order: usize, x: f64) -> Result<f64> {
    check(order, x)?;
    Ok(jn(order, x))
}

/// `(J_order(x), J_{order+1}(x))` from a single evaluation.
pub fn bessel_j_pair(order: usize, x: f64) -> Result<(f64, f64)> {
    check(order, x)?;
    Ok(jn_pair(order, x))
}

fn check(order: usize, x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(SpecFunError::Domain(x));
    }
    if order > MAX_ORDER {
        return Err(SpecFunError::UnsupportedOrder {
            order,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

pub(crate) fn jn(k: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if use_series(k, x) {
        series(k, x)
    } else if use_asymptotic(k, x) {
        hankel(k, x)
    } else if use_upward(k, x) {
        upward(k, x).0
    } else {
        miller(k, x).0
    }
}

pub(crate) fn jn_pair(k: usize, x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (if k == 0 { 1.0 } else { 0.0 }, 0.0);
    }
    if use_series(k, x) {
        (series(k, x), series(k + 1, x))
    } else if use_asymptotic(k + 1, x) {
        (hankel(k, x), hankel(k + 1, x))
    } else if use_upward(k, x) {
        upward(k, x)
    } else {
        miller(k, x)
    }
}

#[inline]
fn use_series(k: usize, x: f64) -> bool {
    x < SERIES_LIMIT || x * x < 4.0 * (k as f64 + 1.0)
}

#[inline]
fn use_asymptotic(k: usize, x: f64) -> bool {
    let kp = k as f64 + 1.0;
    x >= ASYMPTOTIC_MIN && x >= kp * kp
}

#[inline]
fn use_upward(k: usize, x: f64) -> bool {
    x >= ASYMPTOTIC_MIN && (k as f64 + 1.0) <= UPWARD_FRACTION * x
}

/// `(J_k(x), J_{k+1}(x))` by forward recurrence from Hankel's `J_0, J_1`.
fn upward(k: usize, x: f64) -> (f64, f64) {
    let mut lower = hankel(0, x);
    let mut cur = hankel(1, x);
    if k == 0 {
        return (lower, cur);
    }
    let two_over_x = 2.0 / x;
    for m in 1..=k {
        let next = m as f64 * two_over_x * cur - lower;
        lower = cur;
        cur = next;
    }
    (lower, cur)
}

fn series(k: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=k {
        term *= half / i as f64;
        if term == 0.0 {
            return 0.0;
        }
    }
    let q = -half * half;
    let mut sum = term;
    for m in 1..200 {
        term *= q / (m as f64 * (m + k) as f64);
        sum += term;
        if term.abs() <= 1.0e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Hankel's expansion `J_k(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi)`.
fn hankel(k: usize, x: f64) -> f64 {
    let mu = 4.0 * (k as f64) * (k as f64);
    let inv8x = 1.0 / (8.0 * x);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for m in 1..120 {
        let odd = (2 * m - 1) as f64;
        term *= (mu - odd * odd) * inv8x / m as f64;
        let mag = term.abs();
        // asymptotic series: stop at the smallest term
        if mag > prev || mag < 1.0e-17 {
            break;
        }
        prev = mag;
        // term_m multiplies (-1)^{floor(m/2)}; even m go to P, odd to Q
        let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if m % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
    }
    let phase = (k as f64 * 0.5 + 0.25) * PI;
    // cos/sin of (x - phase) with phase reduced modulo 2 pi
    let phase = phase % (2.0 * PI);
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// Miller's algorithm, returning `(J_k(x), J_{k+1}(x))`.
fn miller(k: usize, x: f64) -> (f64, f64) {
    let top = (k + 1).max(x.ceil() as usize);
    let mut start = top + 16 + (10.0 * (top as f64).cbrt()).ceil() as usize;
    if start % 2 == 1 {
        start += 1;
    }
    let two_over_x = 2.0 / x;
    let mut above = 0.0_f64; // f_{m+1}
    let mut cur = 1.0e-30_f64; // f_m
    let mut norm = 0.0_f64;
    let mut jk = 0.0;
    let mut jk1 = 0.0;
    if start == k + 1 {
        jk1 = cur;
    }
    let mut m = start;
    while m > 0 {
        if m.is_multiple_of(2) {
            norm += 2.0 * cur;
        }
        let below = (m as f64) * two_over_x * cur - above;
        above = cur;
        cur = below;
        m -= 1;
        if m == k {
            jk = cur;
        } else if m == k + 1 {
            jk1 = cur;
        }
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            above *= RESCALE_BY;
            norm *= RESCALE_BY;
            jk *= RESCALE_BY;
            jk1 *= RESCALE_BY;
        }
    }
    norm += cur;
    (jk / norm, jk1 / norm)
}

/// McMahon's large-zero expansion for the `j`-th zero of `J_k`.
pub(crate) fn mcmahon(k: usize, j: usize) -> f64 {
    let mu = 4.0 * (k as f64) * (k as f64);
    let beta = (j as f64 + 0.5 * k as f64 - 0.25) * PI;
    let b8 = 8.0 * beta;
    beta - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3))
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * b8.powi(5))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// (1/2pi) * integral over one period of cos(k tau - x sin tau), by the
    /// trapezoid rule; exponentially convergent for the periodic integrand.
    fn quadrature_j(k: usize, x: f64) -> f64 {
        let n = 2 * (x.ceil() as usize + k) + 128;
        let h = 2.0 * PI / n as f64;
        let sum: f64 = (0..n)
            .map(|i| {
                let tau = i as f64 * h;
                (k as f64 * tau - x * tau.sin()).cos()
            })
            .sum();
        sum / n as f64
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn first_zero_of_j0() {
        let v = bessel_j(0, 2.404825557695773).unwrap();
        assert!(v.abs() < 1e-12, "{v}");
    }

    #[test]
    fn rejects_bad_arguments() {
        assert_eq!(bessel_j(0, -1.0), Err(SpecFunError::Domain(-1.0)));
        assert!(matches!(
            bessel_j(0, f64::NAN),
            Err(SpecFunError::Domain(_))
        ));
        assert!(matches!(
            bessel_j(MAX_ORDER + 1, 1.0),
            Err(SpecFunError::UnsupportedOrder { .. })
        ));
    }

    #[test]
    fn agrees_with_quadrature_across_regimes() {
        let orders = [0usize, 1, 2, 3, 5, 10, 17, 40, 75, 120, 150, 200, 256];
        let args = [
            0.01, 0.5, 1.0, 3.7, 7.9, 8.1, 12.0, 24.9, 25.0, 33.3, 60.0, 99.0, 150.5, 240.0, 255.0,
            300.0, 480.0, 777.7, 1200.0, 2000.0,
        ];
        let mut worst: f64 = 0.0;
        for &k in &orders {
            for &x in &args {
                let got = bessel_j(k, x).unwrap();
                let want = quadrature_j(k, x);
                let err = (got - want).abs();
                worst = worst.max(err);
                assert!(
                    err <= 1e-12,
                    "J_{k}({x}) = {got}, quadrature {want}, err {err:e}"
                );
            }
        }
        assert!(worst < 1e-12);
    }

    #[test]
    fn dense_sweep_against_quadrature() {
        // deterministic scatter over k <= 256, x <= 2000
        let mut worst: f64 = 0.0;
        let mut state = 0x2545f4914f6cdd1d_u64;
        for _ in 0..3000 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let k = (state % 257) as usize;
            let u = (state >> 20) as f64 / (1u64 << 44) as f64;
            let x = if state & 1 == 0 {
                2000.0 * u
            } else {
                1.5 * k as f64 * u
            };
            let err = (bessel_j(k, x).unwrap() - quadrature_j(k, x)).abs();
            worst = worst.max(err);
        }
        assert!(worst <= 1e-12, "worst abs error {worst:e}");
    }

    #[test]
    fn pair_matches_single_evaluations() {
        for &(k, x) in &[
            (0usize, 3.0),
            (4, 9.5),
            (30, 31.0),
            (100, 140.0),
            (3, 500.0),
        ] {
            let (a, b) = bessel_j_pair(k, x).unwrap();
            assert!((a - jn(k, x)).abs() < 1e-13);
            assert!((b - jn(k + 1, x)).abs() < 1e-13);
        }
    }

    #[test]
    fn recurrence_holds() {
        for k in 1..60usize {
            for i in 1..40 {
                let x = 0.37 * i as f64 * (1.0 + k as f64 / 10.0);
                let lhs = jn(k - 1, x) + jn(k + 1, x);
                let rhs = 2.0 * k as f64 / x * jn(k, x);
                let scale = jn(k, x).abs().max(1.0);
                assert!((lhs - rhs).abs() <= 1e-9 * scale, "k={k} x={x}");
            }
        }
    }

    #[test]
    fn mcmahon_is_close_for_large_zeros() {
        // tabulated: j_{0,10} = 30.634606468431975, j_{1,5} = 16.470630050877634
        assert!((mcmahon(0, 10) - 30.634606468431975).abs() < 1e-8);
        assert!((mcmahon(1, 5) - 16.470630050877634).abs() < 1e-5);
    }
}
