//! Legendre polynomials `P_n(x)` for `x > 1`, where they grow geometrically.
//!
//! Values are produced by the upward three-term recurrence
//! `(n + 1) P_{n+1} = (2n + 1) x P_n - n P_{n-1}` with a running rescale, so
//! degrees in the thousands stay representable through `log_value`.

use serde::{Deserialize, Serialize};

const RESCALE_ABOVE: f64 = 1e200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegendreEval {
    pub degree: usize,
    pub x: f64,
    /// `P_degree(x)`; `inf` once the value leaves the double range.
    pub value: f64,
    pub log_value: f64,
}

/// Scaled pair `(P_{n-1}, P_n) * exp(-log_scale)`.
#[derive(Debug, Clone, Copy)]
struct ScaledPair {
    prev: f64,
    cur: f64,
    log_scale: f64,
}

fn run_recurrence(degree: usize, x: f64) -> ScaledPair {
    let mut pair = ScaledPair {
        prev: 1.0,
        cur: x,
        log_scale: 0.0,
    };
    if degree == 0 {
        return ScaledPair {
            prev: 0.0,
            cur: 1.0,
            log_scale: 0.0,
        };
    }
    for n in 1..degree {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0) * x * pair.cur - nf * pair.prev) / (nf + 1.0);
        pair.prev = pair.cur;
        pair.cur = next;
        if pair.cur.abs() > RESCALE_ABOVE {
            pair.prev /= RESCALE_ABOVE;
            pair.cur /= RESCALE_ABOVE;
            pair.log_scale += RESCALE_ABOVE.ln();
        }
    }
    pair
}

/// `P_degree(x)` for `x > 1`.
pub fn legendre(degree: usize, x: f64) -> LegendreEval {
    debug_assert!(x > 1.0, "legendre is only used for x > 1");
    let pair = run_recurrence(degree, x);
    let log_value = pair.cur.ln() + pair.log_scale;
    LegendreEval {
        degree,
        x,
        value: log_value.exp(),
        log_value,
    }
}

/// `P_degree(x) / P_{degree+1}(x)`, computed from one scaled recurrence run.
pub fn consecutive_ratio(degree: usize, x: f64) -> f64 {
    let pair = run_recurrence(degree + 1, x);
    pair.prev / pair.cur
}

/// The argument `(1 + t^2) / (1 - t^2)` at which `M_1` relates to `P_{d-1}`.
pub fn legendre_argument(t: f64) -> f64 {
    (1.0 + t * t) / (1.0 - t * t)
}
