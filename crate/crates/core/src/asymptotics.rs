//! Large-d approximations of `E(r, d)`.
//!
//! * `r = 0`: `E ~ sqrt(2d - 1) / 2`.
//! * `0 < r < 1`: `E1 = 2 int_0^1 f_a(t) dt` with the asymptotic density `f_a`,
//!   and the closed form `E2 = 2 int_0^1 C d^(1/4) t^(-3/4) (1 + t)^(-1/2) dt`,
//!   `C = (1 - r)^(1/2) / (2 pi^(5/4) r^(1/2))`.
//! * `r = 1`: `E = 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expected::{check_model, expected_internal, QuadratureConfig};
use crate::quadrature::integrate;
use crate::special::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    RZero,
    RInteriorE1,
    RInteriorE2,
    ROne,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticResult {
    pub value: f64,
    pub regime: Regime,
    pub d: usize,
    pub r: f64,
}

fn check_interior(r: f64, d: usize) -> Result<()> {
    check_model(r, d)?;
    if r == 0.0 || r == 1.0 {
        return Err(Error::InvalidArgument(format!(
            "interior approximation needs 0 < r < 1, got {r}"
        )));
    }
    Ok(())
}

/// `sqrt(2d - 1) / 2`, the uncorrelated large-d behaviour.
pub fn asymptotic_r0(d: usize) -> f64 {
    ((2 * d - 1) as f64).sqrt() / 2.0
}

/// Square of the asymptotic density `f_a(t)`, clamped at zero.
pub fn asymptotic_density_sq(t: f64, r: f64, d: usize) -> f64 {
    let df = d as f64;
    let sqrt_pi = PI.sqrt();
    let root = ((df - 1.0) * t).sqrt();
    let num = (1.0 - r)
        * (2.0 * (1.0 - 2.0 * df) * (r - 1.0) * t * (t + 1.0)
            + sqrt_pi * r * (t * (8.0 * df + t - 6.0) + 1.0) * root);
    let inner = (r - 1.0) * (t + 1.0) - 2.0 * sqrt_pi * r * root;
    let den = 8.0 * PI * PI * t * t * (t + 1.0) * inner * inner;
    (num / den).max(0.0)
}

/// `E1 = 2 int_0^1 f_a(t) dt`.
///
/// `f_a` blows up like `t^(-1/2)` at the origin; with `t = u^4` the integrand
/// `4 u^3 f_a(u^4)` is bounded on `[0, 1]`.
pub fn asymptotic_e1(r: f64, d: usize, cfg: &QuadratureConfig) -> Result<f64> {
    check_interior(r, d)?;
    let integral = integrate(
        |u| {
            let t = u.powi(4);
            4.0 * u.powi(3) * asymptotic_density_sq(t, r, d).sqrt()
        },
        0.0,
        1.0,
        cfg,
    )?;
    Ok(2.0 * integral.value)
}

/// `int_0^1 t^(-3/4) (1 + t)^(-1/2) dt = 8 Gamma(5/4)^2 / sqrt(pi)`.
pub fn e2_constant() -> f64 {
    8.0 * gamma(1.25).powi(2) / PI.sqrt()
}

/// Closed-form approximation `E2`.
pub fn asymptotic_e2(r: f64, d: usize) -> Result<f64> {
    check_interior(r, d)?;
    let prefactor = (d as f64).powf(0.25) * (1.0 - r).sqrt() / (2.0 * PI.powf(1.25) * r.sqrt());
    Ok(2.0 * prefactor * e2_constant())
}

/// Dispatches on the correlation regime: `sqrt(2d-1)/2` at `r = 0`, `E2` for
/// `0 < r < 1`, zero at `r = 1`.
pub fn asymptotic(r: f64, d: usize) -> Result<AsymptoticResult> {
    check_model(r, d)?;
    let (value, regime) = if r == 0.0 {
        (asymptotic_r0(d), Regime::RZero)
    } else if r == 1.0 {
        (0.0, Regime::ROne)
    } else {
        (asymptotic_e2(r, d)?, Regime::RInteriorE2)
    };
    Ok(AsymptoticResult { value, regime, d, r })
}

/// Same dispatch with `E1` in the interior.
pub fn asymptotic_with_e1(r: f64, d: usize, cfg: &QuadratureConfig) -> Result<AsymptoticResult> {
    check_model(r, d)?;
    if r > 0.0 && r < 1.0 {
        return Ok(AsymptoticResult {
            value: asymptotic_e1(r, d, cfg)?,
            regime: Regime::RInteriorE1,
            d,
            r,
        });
    }
    asymptotic(r, d)
}

/// Expected number of real zeros of a random Bernstein polynomial of the given
/// degree with i.i.d. standard-Gaussian coefficients, `2 E(0, degree + 1)`.
pub fn bernstein_expected_real_zeros(degree: usize, cfg: &QuadratureConfig) -> Result<f64> {
    if degree < 1 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    Ok(2.0 * expected_internal(0.0, degree + 1, cfg)?.e)
}

/// Large-degree behaviour `sqrt(2 degree + 1)` of the Bernstein zero count.
pub fn bernstein_asymptote(degree: usize) -> f64 {
    ((2 * degree + 1) as f64).sqrt()
}
