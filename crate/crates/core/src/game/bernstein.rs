//! Real-root isolation on `(0, 1)` for polynomials in Bernstein form.
//!
//! The positive roots of `P(y)` are exactly the roots of the gain function
//! `g(x) = (1 - x)^n P(x / (1 - x))` in `(0, 1)`, and the Bernstein
//! coefficients of `g` are the payoff differences themselves. Descartes' rule
//! of signs applied to Bernstein coefficients bounds the number of roots in
//! the open interval, and de Casteljau subdivision sharpens the bound until
//! every interval carries zero or one sign variation.

/// Bisection depth at which an unresolved interval is reported as a cluster.
const MAX_DEPTH: usize = 64;

/// Polynomial on `[0, 1]` in the Bernstein basis of degree `coeffs.len() - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinPoly {
    coeffs: Vec<f64>,
}

/// Outcome of isolating one root-carrying piece of `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Isolated {
    /// `(lo, hi)` contains exactly one root; `local` are the Bernstein
    /// coefficients of the polynomial restricted to `[lo, hi]`.
    Interval { lo: f64, hi: f64, local: Vec<f64> },
    /// Subdivision landed exactly on a root.
    Exact(f64),
    /// Interval shrank to machine resolution with more than one sign
    /// variation left: a multiple root or a root cluster, counted once.
    Cluster { lo: f64, hi: f64 },
}

pub(crate) fn sign_variations(coeffs: &[f64]) -> usize {
    let mut count = 0;
    let mut last = 0.0_f64;
    for &c in coeffs {
        if c == 0.0 {
            continue;
        }
        if last != 0.0 && (c > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = c;
    }
    count
}

/// Splits Bernstein coefficients on `[0, 1]` at `1/2` into the coefficients
/// on `[0, 1/2]` and `[1/2, 1]` (de Casteljau).
pub(crate) fn split_half(coeffs: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = coeffs.len();
    let mut work = coeffs.to_vec();
    let mut left = Vec::with_capacity(n);
    let mut right = vec![0.0; n];
    left.push(work[0]);
    right[n - 1] = work[n - 1];
    for level in 1..n {
        for i in 0..n - level {
            work[i] = 0.5 * (work[i] + work[i + 1]);
        }
        left.push(work[0]);
        right[n - 1 - level] = work[n - 1 - level];
    }
    (left, right)
}

/// Evaluates `sum_k c_k binom(n, k) s^k (1 - s)^(n - k)` in O(n) without
/// forming binomials, folding from whichever end keeps `s <= 1/2`.
pub(crate) fn eval_bernstein(coeffs: &[f64], s: f64) -> f64 {
    if s <= 0.5 {
        eval_folded(coeffs.len(), |k| coeffs[k], s)
    } else {
        let n = coeffs.len() - 1;
        eval_folded(coeffs.len(), |k| coeffs[n - k], 1.0 - s)
    }
}

// Q_n = c_n,  Q_k = c_k (1 - s)^(n - k) + s (n - k) / (k + 1) Q_{k+1},  g = Q_0.
fn eval_folded(len: usize, coeff: impl Fn(usize) -> f64, s: f64) -> f64 {
    let n = len - 1;
    let one_minus = 1.0 - s;
    let mut acc = coeff(n);
    let mut pow = 1.0;
    for k in (0..n).rev() {
        pow *= one_minus;
        acc = coeff(k) * pow + s * ((n - k) as f64 / (k + 1) as f64) * acc;
    }
    acc
}

impl BernsteinPoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "Bernstein polynomial needs a coefficient");
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        eval_bernstein(&self.coeffs, x)
    }

    /// Derivative at `x` together with the magnitude it is compared against
    /// when deciding whether its sign is resolvable.
    pub fn derivative(&self, x: f64) -> (f64, f64) {
        let n = self.degree();
        if n == 0 {
            return (0.0, 0.0);
        }
        let diffs: Vec<f64> = self.coeffs.windows(2).map(|w| w[1] - w[0]).collect();
        let abs_diffs: Vec<f64> = diffs.iter().map(|v| v.abs()).collect();
        let value = n as f64 * eval_bernstein(&diffs, x);
        let scale = n as f64 * eval_bernstein(&abs_diffs, x);
        (value, scale)
    }

    /// Isolates the distinct roots in `(0, 1)`, left to right.
    pub fn isolate(&self) -> Vec<Isolated> {
        let mut out = Vec::new();
        isolate_rec(&self.coeffs, 0.0, 1.0, 0, &mut out);
        out
    }
}

fn isolate_rec(coeffs: &[f64], lo: f64, hi: f64, depth: usize, out: &mut Vec<Isolated>) {
    let variations = sign_variations(coeffs);
    if variations == 0 {
        return;
    }
    if variations == 1 {
        out.push(Isolated::Interval {
            lo,
            hi,
            local: coeffs.to_vec(),
        });
        return;
    }
    let mid = 0.5 * (lo + hi);
    if depth >= MAX_DEPTH || mid <= lo || mid >= hi {
        out.push(Isolated::Cluster { lo, hi });
        return;
    }
    let (left, right) = split_half(coeffs);
    isolate_rec(&left, lo, mid, depth + 1, out);
    if right[0] == 0.0 {
        out.push(Isolated::Exact(mid));
    }
    isolate_rec(&right, mid, hi, depth + 1, out);
}

fn first_nonzero_sign(coeffs: &[f64]) -> f64 {
    coeffs
        .iter()
        .find(|c| **c != 0.0)
        .map_or(0.0, |c| c.signum())
}

/// Shrinks an isolating interval until its image under `x -> x / (1 - x)` is
/// narrower than `y_tol` (or a few ulps of the root, whichever is larger).
/// Returns the final `(x_lo, x_hi)` bracket.
///
/// Illinois-modified regula falsi, with a bisection step whenever the bracket
/// fails to halve over two iterations.
pub fn refine(lo: f64, hi: f64, local: &[f64], y_tol: f64) -> (f64, f64) {
    let to_x = |s: f64| lo + (hi - lo) * s;
    let sign_lo = first_nonzero_sign(local);
    let sign_hi = first_nonzero_sign(&local.iter().rev().copied().collect::<Vec<_>>());
    debug_assert!(sign_lo * sign_hi < 0.0, "refine needs a sign change");

    let endpoint = |v: f64, sign: f64| if v == 0.0 { sign * f64::MIN_POSITIVE } else { v };
    let (mut a, mut b) = (0.0_f64, 1.0_f64);
    let mut fa = endpoint(local[0], sign_lo);
    let mut fb = endpoint(local[local.len() - 1], sign_hi);
    let mut side = 0i8;
    let mut width_two_ago = f64::INFINITY;
    let mut width_prev = 1.0_f64;

    for _ in 0..400 {
        let (xa, xb) = (to_x(a), to_x(b));
        let (ya, yb) = (xa / (1.0 - xa), xb / (1.0 - xb));
        // ya stays finite while xb may still be 1
        let ulps = 4.0 * f64::EPSILON * ya.abs();
        if yb - ya <= y_tol.max(ulps) {
            break;
        }
        let bisect_mid = 0.5 * (a + b);
        if bisect_mid <= a || bisect_mid >= b || xa == xb {
            break;
        }
        let width = b - a;
        let use_bisection = width > 0.5 * width_two_ago;
        width_two_ago = width_prev;
        width_prev = width;

        let mut c = if use_bisection {
            bisect_mid
        } else {
            (a * fb - b * fa) / (fb - fa)
        };
        if !(c > a && c < b) {
            c = bisect_mid;
        }
        let fc = eval_bernstein(local, c);
        if fc == 0.0 {
            return (to_x(c), to_x(c));
        }
        if (fc > 0.0) == (fa > 0.0) {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    (to_x(a), to_x(b))
}
