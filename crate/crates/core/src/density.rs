//! Density of positive zeros of the gain polynomial with equicorrelated
//! standard-Gaussian coefficients.
//!
//! With `n = d - 1` and `u_i = binom(n, i)^2 t^(2i)` the building blocks are
//!
//! ```text
//! M1 = sum u_i            M2 = (1 + t)^(2n)
//! A1 = sum i^2 u_i / t^2  A2 = n^2 (1 + t)^(2n - 2)
//! B1 = sum i u_i / t      B2 = n (1 + t)^(2n - 1)
//! ```
//!
//! mixed as `M = (1 - r) M1 + r M2` (same for `A`, `B`), and the density is
//! `f = sqrt(A M - B^2) / (pi M)`.
//!
//! Every block overflows a double long before `d = 600`, so all nine values
//! share one normalisation `exp(log_scale)`. The radicand is never formed as a
//! difference: `A2 M2 = B2^2` exactly, and the remaining two brackets are
//! weighted sums of squares,
//!
//! ```text
//! A1 M1 - B1^2           = M1 / t^2 * sum u_i (i - mu)^2,   mu = sum i u_i / M1
//! A1 M2 + A2 M1 - 2 B1 B2 = M2 / t^2 * sum u_i (i - kappa)^2, kappa = n t / (1 + t)
//! ```
//!
//! so `A M - B^2` is evaluated without cancellation for every `r` in `[0, 1]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::special;

/// Below this `t` the density is replaced by its limit at `t = 0`.
const T_LIMIT: f64 = 1e-100;

/// The nine density building blocks at one point, all scaled by
/// `exp(-log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityComponents {
    pub t: f64,
    pub d: usize,
    pub r: f64,
    pub m1: f64,
    pub a1: f64,
    pub b1: f64,
    pub m2: f64,
    pub a2: f64,
    pub b2: f64,
    pub m: f64,
    pub a: f64,
    pub b: f64,
    pub log_scale: f64,
    /// `A M - B^2` in the same scaling (squared), computed without
    /// cancellation.
    pub radicand: f64,
}

impl DensityComponents {
    /// Natural log of an (unscaled) block given its scaled value.
    pub fn unscaled_ln(&self, scaled: f64) -> f64 {
        scaled.ln() + self.log_scale
    }
}

fn check_args(t: f64, r: f64, d: usize) {
    assert!(d >= 2, "d must be at least 2, got {d}");
    assert!((0.0..=1.0).contains(&r), "r must lie in [0, 1], got {r}");
    assert!(t >= 0.0 && t.is_finite(), "t must be finite and non-negative, got {t}");
}

/// Building blocks of the density at `t > 0`.
///
/// # Panics
/// If `d < 2`, `r` is outside `[0, 1]`, or `t` is negative or not finite.
pub fn density_components(t: f64, r: f64, d: usize) -> DensityComponents {
    check_args(t, r, d);
    assert!(t > 0.0, "density components need t > 0");
    let n = d - 1;
    let nf = n as f64;
    let ln_t = t.ln();

    let mut log_u = Vec::with_capacity(d);
    log_u.push(0.0);
    for i in 1..=n {
        let ratio = (n - i + 1) as f64 / i as f64;
        let prev = log_u[i - 1];
        log_u.push(prev + 2.0 * (ratio.ln() + ln_t));
    }
    let l1 = log_u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_u.iter().map(|l| (l - l1).exp()).collect();

    let s0: f64 = w.iter().sum();
    let s1: f64 = w.iter().enumerate().map(|(i, w)| i as f64 * w).sum();
    let s2: f64 = w.iter().enumerate().map(|(i, w)| (i * i) as f64 * w).sum();
    let mu = s1 / s0;
    let kappa = nf * t / (1.0 + t);
    let v1: f64 = w
        .iter()
        .enumerate()
        .map(|(i, w)| w * (i as f64 - mu).powi(2))
        .sum();
    let v2: f64 = w
        .iter()
        .enumerate()
        .map(|(i, w)| w * (i as f64 - kappa).powi(2))
        .sum();

    let log_m1 = l1 + s0.ln();
    let log_m2 = 2.0 * nf * t.ln_1p();
    let log_scale = log_m1.max(log_m2);
    let e = (l1 - log_scale).exp();

    let m1 = s0 * e;
    let a1 = s2 * e / (t * t);
    let b1 = s1 * e / t;
    let m2 = (log_m2 - log_scale).exp();
    let a2 = nf * nf * m2 / ((1.0 + t) * (1.0 + t));
    let b2 = nf * m2 / (1.0 + t);

    let q = 1.0 - r;
    let radicand = (q * q * m1 * v1 * e + r * q * m2 * v2 * e) / (t * t);
    DensityComponents {
        t,
        d,
        r,
        m1,
        a1,
        b1,
        m2,
        a2,
        b2,
        m: q * m1 + r * m2,
        a: q * a1 + r * a2,
        b: q * b1 + r * b2,
        log_scale,
        radicand,
    }
}

/// Value of the density at `t = 0`: `(d - 1) sqrt(1 - r^2) / pi`.
pub fn density_at_zero(r: f64, d: usize) -> f64 {
    (d - 1) as f64 * (1.0 - r * r).max(0.0).sqrt() / PI
}

/// `f(t; r, d)` for `t >= 0`.
///
/// # Panics
/// As [`density_components`], except that `t = 0` is allowed.
pub fn density(t: f64, r: f64, d: usize) -> f64 {
    check_args(t, r, d);
    if r == 1.0 {
        return 0.0;
    }
    if t < T_LIMIT {
        return density_at_zero(r, d);
    }
    let c = density_components(t, r, d);
    c.radicand.max(0.0).sqrt() / (PI * c.m)
}

/// Closed form of `f(1; r, d)` through central binomial coefficients.
pub fn density_at_one(r: f64, d: usize) -> f64 {
    check_args(1.0, r, d);
    if r == 1.0 {
        return 0.0;
    }
    let n = (d - 1) as u64;
    let nf = n as f64;
    // alpha = r / (1 - r) * 4^n / binom(2n, n)
    let alpha = r / (1.0 - r) * (nf * 4f64.ln() - special::ln_central_binomial(n)).exp();
    nf / (2.0 * (2.0 * nf - 1.0).sqrt()) / PI / (1.0 + alpha).sqrt()
}

/// Large-d behaviour of `f(1; r, d)` for `0 < r < 1`.
pub fn density_at_one_asymptotic(r: f64, d: usize) -> f64 {
    let n = (d - 1) as f64;
    n.powf(0.25) * (1.0 - r).sqrt() / (2.0 * 2f64.sqrt() * PI.powf(1.25) * r.sqrt())
}

/// Density in the frequency coordinate: `g(y) = f(y / (1 - y)) / (1 - y)^2`.
/// The endpoints take their limits, `g(0) = g(1) = f(0)`.
pub fn density_in_x(y: f64, r: f64, d: usize) -> f64 {
    assert!((0.0..=1.0).contains(&y), "y must lie in [0, 1], got {y}");
    if y == 1.0 {
        return density(0.0, r, d);
    }
    let one_minus = 1.0 - y;
    density(y / one_minus, r, d) / (one_minus * one_minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn small_t_limits_of_blocks() {
        let c = density_components(1e-9, 0.3, 6);
        let scale = c.log_scale.exp();
        assert_relative_eq!(c.m1 * scale, 1.0, max_relative = 1e-12);
        assert_relative_eq!(c.a1 * scale, 25.0, max_relative = 1e-12);
        assert!(c.b1 * scale < 1e-6);
    }

    #[test]
    fn m1_at_one_is_central_binomial() {
        for d in [2usize, 3, 8, 40, 300] {
            let c = density_components(1.0, 0.0, d);
            let expected = special::ln_central_binomial((d - 1) as u64);
            assert_relative_eq!(c.unscaled_ln(c.m1), expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn r_one_is_exactly_zero() {
        for d in 2..20 {
            for t in [0.0, 0.1, 0.5, 1.0, 3.0] {
                assert_eq!(density(t, 1.0, d), 0.0);
            }
        }
    }

    #[test]
    fn endpoint_limit() {
        let limit = density_at_zero(0.6, 5);
        assert_relative_eq!(limit, 4.0 * 0.8 / PI, max_relative = 1e-15);
        assert_relative_eq!(density(1e-8, 0.6, 5), limit, max_relative = 1e-7);
    }

    #[test]
    fn value_at_one_for_three_players() {
        let expected = 2.0 / (2.0 * PI * 3f64.sqrt());
        assert_relative_eq!(density(1.0, 0.0, 3), expected, max_relative = 1e-12);
        assert_relative_eq!(density_at_one(0.0, 3), expected, max_relative = 1e-12);
        assert!((expected - 0.18378).abs() < 1e-5);
    }

    #[test]
    fn closed_form_at_one_matches_blocks() {
        for d in [2usize, 3, 10, 57, 400] {
            for r in [0.0, 0.2, 0.5, 0.9, 0.999] {
                assert_relative_eq!(
                    density_at_one(r, d),
                    density(1.0, r, d),
                    max_relative = 1e-10
                );
            }
        }
        assert_eq!(density_at_one(1.0, 12), 0.0);
    }

    #[test]
    fn value_at_one_approaches_its_asymptote() {
        let ratio = density_at_one(0.5, 400) / density_at_one_asymptotic(0.5, 400);
        assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn symmetric_in_frequency_coordinate() {
        assert_relative_eq!(
            density_in_x(0.3, 0.4, 6),
            density_in_x(0.7, 0.4, 6),
            max_relative = 1e-9
        );
        assert_relative_eq!(density_in_x(0.5, 0.4, 6), 4.0 * density(1.0, 0.4, 6));
        assert_eq!(density_in_x(0.2, 1.0, 6), 0.0);
        assert_eq!(density_in_x(0.0, 0.3, 4), density_in_x(1.0, 0.3, 4));
    }

    // Reference values from a 40-digit evaluation of the defining formula.
    #[test]
    fn frozen_high_precision_values() {
        let cases = [
            (0.3, 0.4, 7, 0.448_072_835_567_981_54),
            (0.9, 0.8, 50, 0.123_409_510_930_782_13),
            (2.5, 0.2, 12, 0.090_723_128_137_602_41),
            (0.05, 0.0, 300, 16.591_861_127_810_431),
            (1.0, 0.5, 600, 0.413_582_851_184_269),
        ];
        for (t, r, d, want) in cases {
            assert_relative_eq!(density(t, r, d), want, max_relative = 1e-11);
        }
    }
}
