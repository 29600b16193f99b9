//! Expected number of internal equilibria `E(r, d) = 2 * int_0^1 f(t; r, d) dt`
//! and of stable ones, `SE(r, d) = E(r, d) / 2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::density;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Integral};

pub use crate::quadrature::QuadratureConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedResult {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "SE")]
    pub se: f64,
    pub est_error: f64,
    pub d: usize,
    pub r: f64,
}

pub(crate) fn check_model(r: f64, d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("d must be at least 2, got {d}")));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("r must lie in [0, 1], got {r}")));
    }
    Ok(())
}

/// Halves the absolute tolerance so that doubling the integral keeps the
/// error within the caller's bound.
fn half_interval_cfg(cfg: &QuadratureConfig) -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: 0.5 * cfg.abs_tol,
        ..*cfg
    }
}

fn doubled(r: f64, d: usize, integral: Integral) -> ExpectedResult {
    let e = 2.0 * integral.value;
    ExpectedResult {
        e,
        se: 0.5 * e,
        est_error: 2.0 * integral.est_error,
        d,
        r,
    }
}

/// `E(r, d)` by adaptive quadrature of the density over `[0, 1]`.
///
/// On budget exhaustion the error carries the doubled partial value and bound.
pub fn expected_internal(r: f64, d: usize, cfg: &QuadratureConfig) -> Result<ExpectedResult> {
    check_model(r, d)?;
    cfg.validate()?;
    if r == 1.0 {
        return Ok(ExpectedResult {
            e: 0.0,
            se: 0.0,
            est_error: 0.0,
            d,
            r,
        });
    }
    match integrate(|t| density(t, r, d), 0.0, 1.0, &half_interval_cfg(cfg)) {
        Ok(integral) => Ok(doubled(r, d, integral)),
        Err(Error::ConvergenceFailure {
            value,
            est_error,
            subdivisions,
        }) => Err(Error::ConvergenceFailure {
            value: 2.0 * value,
            est_error: 2.0 * est_error,
            subdivisions,
        }),
        Err(e) => Err(e),
    }
}

/// `int_1^cutoff f(t) dt`, integrated in `s = ln t` so the slow `1/t^2` decay
/// is spread evenly over the interval.
pub fn integral_above_one(r: f64, d: usize, cfg: &QuadratureConfig, cutoff: f64) -> Result<f64> {
    check_model(r, d)?;
    if !(cutoff > 1.0) {
        return Err(Error::InvalidArgument(format!("cutoff must exceed 1, got {cutoff}")));
    }
    if r == 1.0 {
        return Ok(0.0);
    }
    let integral = integrate(
        |s| {
            let t = s.exp();
            density(t, r, d) * t
        },
        0.0,
        cutoff.ln(),
        cfg,
    )?;
    Ok(integral.value)
}

/// Truncated form of the defining improper integral, `int_0^cutoff f(t) dt`.
///
/// The neglected tail equals `int_0^(1/cutoff) f`, at most
/// `f(0; r, d) / cutoff`-ish, which is why `cutoff >= 10` is required.
pub fn expected_internal_improper(
    r: f64,
    d: usize,
    cfg: &QuadratureConfig,
    cutoff: f64,
) -> Result<f64> {
    check_model(r, d)?;
    if !(cutoff >= 10.0) {
        return Err(Error::InvalidArgument(format!("cutoff must be at least 10, got {cutoff}")));
    }
    if r == 1.0 {
        return Ok(0.0);
    }
    let below = integrate(|t| density(t, r, d), 0.0, 1.0, cfg)?.value;
    Ok(below + integral_above_one(r, d, cfg, cutoff)?)
}

/// One cell of an `(r, d)` grid evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveCell {
    pub d: usize,
    pub r: f64,
    pub result: Result<ExpectedResult>,
}

/// Evaluates `E` on the Cartesian product of the grids, rows ordered with
/// `d` outer and `r` inner. Cells fail individually.
pub fn expected_curve(r_values: &[f64], d_values: &[usize], cfg: &QuadratureConfig) -> Vec<CurveCell> {
    let cells: Vec<(usize, f64)> = d_values
        .iter()
        .flat_map(|&d| r_values.iter().map(move |&r| (d, r)))
        .collect();
    cells
        .into_par_iter()
        .map(|(d, r)| CurveCell {
            d,
            r,
            result: expected_internal(r, d, cfg),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn two_player_closed_form(r: f64) -> f64 {
        0.5 - r.asin() / PI
    }

    #[test]
    fn fully_correlated_is_zero() {
        for d in [2, 5, 40] {
            let res = expected_internal(1.0, d, &QuadratureConfig::default()).unwrap();
            assert_eq!(res.e, 0.0);
            assert_eq!(res.se, 0.0);
        }
    }

    #[test]
    fn two_players_match_arcsine_law() {
        let cfg = QuadratureConfig::default();
        for r in [0.0, 0.5] {
            let res = expected_internal(r, 2, &cfg).unwrap();
            assert!((res.e - two_player_closed_form(r)).abs() < 1e-8, "r={r}: {}", res.e);
            assert_eq!(res.se, res.e / 2.0);
            assert!(res.est_error <= cfg.abs_tol.max(cfg.rel_tol * res.e));
        }
    }

    #[test]
    fn truncated_improper_integral_agrees() {
        let cfg = QuadratureConfig::default();
        let finite = expected_internal(0.3, 4, &cfg).unwrap().e;
        let improper = expected_internal_improper(0.3, 4, &cfg, 1e3).unwrap();
        assert!((finite - improper).abs() < 1e-3);
        assert_eq!(expected_internal_improper(1.0, 4, &cfg, 1e3).unwrap(), 0.0);
        let d2 = expected_internal_improper(0.0, 2, &cfg, 1e4).unwrap();
        assert!((d2 - 0.5).abs() < 1e-4);
    }

    #[test]
    fn invalid_inputs() {
        let cfg = QuadratureConfig::default();
        assert!(expected_internal(1.2, 3, &cfg).is_err());
        assert!(expected_internal(0.2, 1, &cfg).is_err());
        assert!(expected_internal_improper(0.2, 3, &cfg, 5.0).is_err());
    }

    #[test]
    fn curve_orders_d_outer_r_inner() {
        let cfg = QuadratureConfig::default();
        let cells = expected_curve(&[0.0, 0.5, 1.0], &[3, 5], &cfg);
        let order: Vec<(usize, f64)> = cells.iter().map(|c| (c.d, c.r)).collect();
        assert_eq!(
            order,
            vec![(3, 0.0), (3, 0.5), (3, 1.0), (5, 0.0), (5, 0.5), (5, 1.0)]
        );
        assert_eq!(cells[5].result.as_ref().unwrap().e, 0.0);
        for pair in cells.chunks(3) {
            let es: Vec<f64> = pair.iter().map(|c| c.result.as_ref().unwrap().e).collect();
            assert!(es[0] >= es[1] && es[1] >= es[2]);
        }
    }

    #[test]
    fn grows_with_group_size_at_zero_correlation() {
        let cfg = QuadratureConfig::default();
        let mut prev = 0.0;
        for d in 2..=20 {
            let e = expected_internal(0.0, d, &cfg).unwrap().e;
            assert!(e > prev, "d={d}");
            prev = e;
        }
    }
}
