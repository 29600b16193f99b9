//! d-player two-strategy games, their gain polynomial, and internal equilibria.
//!
//! A game is described by the payoffs `a_k` (resp. `b_k`) of an A-strategist
//! (resp. B-strategist) facing `k` A co-players. Internal equilibria are the
//! zeros in `(0, 1)` of the gain function
//! `g(x) = sum_k beta_k binom(d-1, k) x^k (1-x)^(d-1-k)`, `beta_k = a_k - b_k`,
//! or equivalently the positive zeros of `P(y) = sum_k beta_k binom(d-1, k) y^k`
//! under `y = x / (1 - x)`.

mod bernstein;

pub use bernstein::{BernsteinPoly, Isolated};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special;

/// Relative threshold under which a coefficient counts as zero.
pub const EPS_ZERO: f64 = 1e-12;
/// Absolute tolerance on located roots, in y-coordinates.
pub const EPS_ROOT: f64 = 1e-10;
/// Relative threshold under which the derivative sign at a root is not trusted.
pub const EPS_DERIV: f64 = 1e-9;

/// Payoff entries of one d-player two-strategy game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    d: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl GameSpec {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidGame(format!(
                "payoff vectors differ in length ({} vs {})",
                a.len(),
                b.len()
            )));
        }
        if a.len() < 2 {
            return Err(Error::InvalidGame(format!(
                "need d >= 2 players, got {}",
                a.len()
            )));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::InvalidGame("payoffs must be finite".into()));
        }
        Ok(Self { d: a.len(), a, b })
    }

    /// Game whose payoff differences are `beta` (B-strategist payoffs all zero).
    pub fn from_beta(beta: Vec<f64>) -> Result<Self> {
        let zeros = vec![0.0; beta.len()];
        Self::new(beta, zeros)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn beta(&self) -> Vec<f64> {
        self.a.iter().zip(&self.b).map(|(a, b)| a - b).collect()
    }
}

/// `P(y) = sum_k coeffs[k] y^k` with `coeffs[k] = beta[k] * binom(d-1, k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainPolynomial {
    d: usize,
    beta: Vec<f64>,
    coeffs: Vec<f64>,
}

impl GainPolynomial {
    pub fn from_beta(beta: Vec<f64>) -> Result<Self> {
        if beta.len() < 2 {
            return Err(Error::InvalidGame(format!(
                "need d >= 2 players, got {}",
                beta.len()
            )));
        }
        if beta.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGame("payoff differences must be finite".into()));
        }
        let d = beta.len();
        let n = (d - 1) as u64;
        let coeffs = beta
            .iter()
            .enumerate()
            .map(|(k, b)| b * special::binomial(n, k as u64))
            .collect();
        Ok(Self { d, beta, coeffs })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `P(y)` by Horner's rule.
    pub fn eval(&self, y: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * y + c)
    }

    /// `P'(y) = sum_k k c_k y^(k-1)`.
    pub fn derivative(&self, y: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, c)| acc * y + k as f64 * c)
    }

    fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Strips vanishing coefficients at both ends and returns the remaining
    /// polynomial in Bernstein form on `[0, 1]`, together with a flag telling
    /// whether anything at or below `EPS_ZERO * max|c_k|` had to be stripped.
    ///
    /// Stripping `y^lo` only removes the root at `y = 0`; stripping leading
    /// terms lowers the degree. Neither changes the positive roots.
    fn reduced_bernstein(&self) -> Result<(BernsteinPoly, bool)> {
        let max = self.max_abs_coeff();
        if max == 0.0 {
            return Err(Error::AllCoefficientsZero);
        }
        let tiny = EPS_ZERO * max;
        let lo = self.coeffs.iter().position(|c| *c != 0.0).unwrap_or(0);
        let hi = self.coeffs.iter().rposition(|c| *c != 0.0).unwrap_or(0);
        let near_degenerate = self.coeffs[0].abs() <= tiny || self.coeffs[self.d - 1].abs() <= tiny;

        let full = self.d - 1;
        let n = hi - lo;
        let coeffs = if lo == 0 && hi == full {
            self.beta.clone()
        } else {
            // c_k / binom(n, k - lo) expressed through beta to keep the full-degree
            // case bit-exact.
            (lo..=hi)
                .map(|k| {
                    let ratio = (special::ln_binomial(full as u64, k as u64)
                        - special::ln_binomial(n as u64, (k - lo) as u64))
                    .exp();
                    self.beta[k] * ratio
                })
                .collect()
        };
        Ok((BernsteinPoly::new(coeffs), near_degenerate))
    }
}

/// Stability of an internal equilibrium under the replicator dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Unstable,
    /// `|P'(y*)|` fell below the resolvable threshold.
    Indeterminate,
}

/// Internal equilibria of one game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub roots_y: Vec<f64>,
    pub roots_x: Vec<f64>,
    pub stability: Vec<Stability>,
    pub count: usize,
    pub stable_count: usize,
    pub indeterminate_count: usize,
    /// An end coefficient of `P` was zero or negligibly small.
    pub near_degenerate: bool,
}

impl EquilibriumReport {
    pub fn stable_mask(&self) -> Vec<bool> {
        self.stability
            .iter()
            .map(|s| *s == Stability::Stable)
            .collect()
    }
}

pub fn gain_polynomial(game: &GameSpec) -> GainPolynomial {
    GainPolynomial::from_beta(game.beta()).expect("GameSpec invariants guarantee a valid polynomial")
}

/// The Bernstein-form gain function `g(x)` for `x` in `[0, 1]`.
pub fn gain_function_value(game: &GameSpec, x: f64) -> f64 {
    bernstein::eval_bernstein(&game.beta(), x)
}

/// Number of distinct roots of `p` in `(0, inf)`.
pub fn count_positive_roots(p: &GainPolynomial) -> Result<usize> {
    let (poly, _) = p.reduced_bernstein()?;
    Ok(poly.isolate().len())
}

pub fn find_equilibria(game: &GameSpec) -> Result<EquilibriumReport> {
    equilibria_of(&gain_polynomial(game))
}

/// Locates and classifies every positive root of `p`.
pub fn equilibria_of(p: &GainPolynomial) -> Result<EquilibriumReport> {
    let (poly, near_degenerate) = p.reduced_bernstein()?;
    let pieces = poly.isolate();

    let mut roots_y = Vec::with_capacity(pieces.len());
    let mut roots_x = Vec::with_capacity(pieces.len());
    let mut stability = Vec::with_capacity(pieces.len());
    for piece in &pieces {
        let (x_lo, x_hi, cluster) = match piece {
            Isolated::Interval { lo, hi, local } => {
                let (a, b) = bernstein::refine(*lo, *hi, local, EPS_ROOT);
                (a, b, false)
            }
            Isolated::Exact(x) => (*x, *x, false),
            Isolated::Cluster { lo, hi } => (*lo, *hi, true),
        };
        let y = 0.5 * (x_lo / (1.0 - x_lo) + x_hi / (1.0 - x_hi));
        let x = y / (1.0 + y);
        let (slope, scale) = poly.derivative(x);
        let s = if cluster || slope.abs() < EPS_DERIV * scale {
            Stability::Indeterminate
        } else if slope < 0.0 {
            Stability::Stable
        } else {
            Stability::Unstable
        };
        roots_y.push(y);
        roots_x.push(x);
        stability.push(s);
    }
    let stable_count = stability.iter().filter(|s| **s == Stability::Stable).count();
    let indeterminate_count = stability
        .iter()
        .filter(|s| **s == Stability::Indeterminate)
        .count();
    Ok(EquilibriumReport {
        count: roots_y.len(),
        roots_y,
        roots_x,
        stability,
        stable_count,
        indeterminate_count,
        near_degenerate,
    })
}
