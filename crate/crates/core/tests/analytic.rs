use approx::assert_relative_eq;
use eqgames_core::asymptotics::{asymptotic, asymptotic_e2, bernstein_expected_real_zeros, Regime};
use eqgames_core::density::{density, density_components};
use eqgames_core::expected::{expected_internal, integral_above_one};
use eqgames_core::legendre::{consecutive_ratio, legendre, legendre_argument};
use eqgames_core::reports::{relative_deviation, Approximation, TABLE_D, TABLE_R};
use eqgames_core::QuadratureConfig;
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn ln_m1(t: f64, d: usize) -> f64 {
    let c = density_components(t, 0.0, d);
    c.unscaled_ln(c.m1)
}

#[test]
fn m1_through_legendre() {
    let (t, d) = (0.3, 7);
    let x = legendre_argument(t);
    let via_legendre = 6.0 * (1.0 - t * t).ln() + legendre(d - 1, x).log_value;
    assert_relative_eq!(ln_m1(t, d).exp(), via_legendre.exp(), max_relative = 1e-10);
}

#[test]
fn second_derivative_identity() {
    // A1 = (M1' + t M1'') / (4t), derivatives by central differences
    for (t, d) in [(0.2, 4), (0.55, 9), (0.9, 15)] {
        let h = 1e-4;
        let m = |s: f64| ln_m1(s, d).exp();
        let m1p = (m(t + h) - m(t - h)) / (2.0 * h);
        let m1pp = (m(t + h) - 2.0 * m(t) + m(t - h)) / (h * h);
        let c = density_components(t, 0.0, d);
        let a1 = (c.a1.ln() + c.log_scale).exp();
        assert_relative_eq!((m1p + t * m1pp) / (4.0 * t), a1, max_relative = 1e-5);
    }
}

#[test]
fn legendre_ratio_limit() {
    for t in [0.1, 0.5, 0.9] {
        let ratio = consecutive_ratio(500, legendre_argument(t));
        assert!((ratio - (1.0 - t) / (1.0 + t)).abs() < 1e-3, "t={t}: {ratio}");
    }
}

#[test]
fn radicand_matches_direct_difference_away_from_cancellation() {
    for (t, r, d) in [(0.4, 0.0, 5), (0.8, 0.3, 12), (1.7, 0.6, 30)] {
        let c = density_components(t, r, d);
        let direct = c.a * c.m - c.b * c.b;
        assert!(direct >= -1e-10 * c.a * c.m);
        assert_relative_eq!(c.radicand, direct, max_relative = 1e-8);
    }
}

#[test]
fn unit_interval_and_tail_carry_equal_mass() {
    for (r, d) in [(0.0, 5), (0.4, 12), (0.9, 3)] {
        let below = expected_internal(r, d, &cfg()).unwrap().e / 2.0;
        let above = integral_above_one(r, d, &cfg(), 1e9).unwrap();
        assert!((below - above).abs() < 1e-6, "r={r} d={d}: {below} vs {above}");
    }
}

#[test]
fn density_decreases_in_correlation() {
    for (t, d) in [(0.05, 3), (0.5, 10), (1.0, 40), (3.0, 7)] {
        let values: Vec<f64> = (0..50).map(|k| density(t, k as f64 / 49.0, d)).collect();
        for w in values.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
    }
}

#[test]
fn deviations_shrink_with_group_size() {
    for kind in [Approximation::E1, Approximation::E2] {
        for &r in &TABLE_R {
            let devs: Vec<f64> = TABLE_D
                .iter()
                .map(|&d| relative_deviation(kind, r, d, &cfg()).unwrap().abs())
                .collect();
            for w in devs.windows(2) {
                assert!(w[1] < w[0], "{kind:?} r={r}: {devs:?}");
            }
        }
    }
}

#[test]
fn closed_form_wins_near_full_correlation() {
    let dev = |kind, r| relative_deviation(kind, r, 120, &cfg()).unwrap().abs();
    assert!(dev(Approximation::E2, 0.8) < dev(Approximation::E1, 0.8));
    assert!(dev(Approximation::E1, 0.1) < dev(Approximation::E2, 0.1));
}

#[test]
fn table_spot_values() {
    let dev = |kind, r, d| relative_deviation(kind, r, d, &cfg()).unwrap().abs();
    assert!((dev(Approximation::E1, 0.0, 20) - 0.119).abs() < 0.01);
    assert!((dev(Approximation::E1, 0.5, 20) - 0.484).abs() < 0.01);
    assert!((dev(Approximation::E1, 0.8, 600) - 0.385).abs() < 0.01);
    assert!((dev(Approximation::E2, 0.8, 20) - 0.374).abs() < 0.01);
    assert!((dev(Approximation::E2, 0.01, 20) - 5.855).abs() < 0.05);
    let mid = asymptotic(0.3, 120).unwrap();
    assert_eq!(mid.regime, Regime::RInteriorE2);
    let e = expected_internal(0.3, 120, &cfg()).unwrap().e;
    assert!((mid.value / e - 1.0 - 0.397).abs() < 0.01);
}

#[test]
fn bernstein_zero_count_grows_with_degree() {
    let mut prev = 0.0;
    for degree in 1..=20 {
        let v = bernstein_expected_real_zeros(degree, &cfg()).unwrap();
        assert!(v > prev);
        prev = v;
    }
}

proptest! {
    #[test]
    fn inversion_symmetry(t in 0.001f64..1.0, r in 0.0f64..0.99, d in 2usize..=100) {
        let lhs = density(1.0 / t, r, d);
        let rhs = t * t * density(t, r, d);
        prop_assert!((lhs / rhs - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn e2_doubles_when_d_grows_sixteenfold(r in 0.001f64..0.999, d in 2usize..1000) {
        let ratio = asymptotic_e2(r, 16 * d).unwrap() / asymptotic_e2(r, d).unwrap();
        prop_assert!((ratio - 2.0).abs() < 1e-12);
    }
}
