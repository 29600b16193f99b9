//! Binomial coefficients and gamma-function helpers.

/// Largest `n` for which every `binomial(n, k)` is computed exactly in `u128`.
pub const EXACT_BINOMIAL_MAX_N: u64 = 64;

/// Exact binomial coefficient, or `None` when it does not fit in `u128`.
pub fn binomial_exact(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

/// Natural log of `binomial(n, k)` via log-gamma.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n, "ln_binomial: k > n");
    ln_gamma((n + 1) as f64) - ln_gamma((k + 1) as f64) - ln_gamma((n - k + 1) as f64)
}

/// `binomial(n, k)` as a double: exact integer path for `n <= 64`,
/// otherwise `exp(ln_binomial)`.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= EXACT_BINOMIAL_MAX_N {
        if let Some(b) = binomial_exact(n, k) {
            return b as f64;
        }
    }
    ln_binomial(n, k).exp()
}

/// Natural log of the central binomial coefficient `binomial(2n, n)`.
pub fn ln_central_binomial(n: u64) -> f64 {
    ln_binomial(2 * n, n)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rows_are_exact() {
        assert_eq!(binomial_exact(4, 2), Some(6));
        assert_eq!(binomial_exact(2, 1), Some(2));
        assert_eq!(binomial_exact(0, 0), Some(1));
        assert_eq!(binomial_exact(3, 5), Some(0));
        assert_eq!(binomial_exact(64, 32), Some(1_832_624_140_942_590_534));
    }

    #[test]
    fn log_path_matches_exact_path() {
        for n in [10u64, 30, 50, 64] {
            for k in 0..=n {
                let exact = binomial_exact(n, k).unwrap() as f64;
                let via_log = ln_binomial(n, k).exp();
                assert!(((via_log - exact) / exact).abs() < 1e-12, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn large_n_uses_log_domain() {
        // binomial(100, 50) = 100891344545564193334812497256
        let b = binomial(100, 50);
        assert!((b / 1.008_913_445_455_641_9e29 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_five_quarters() {
        // Gamma(5/4) = Gamma(1/4) / 4
        assert!((gamma(1.25) - 0.906_402_477_055_477).abs() < 1e-13);
    }
}
