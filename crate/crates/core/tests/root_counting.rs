//! Root counts from Bernstein isolation against a dense sign-change scan.

use eqgames_core::game::{count_positive_roots, equilibria_of, find_equilibria, Stability, EPS_ROOT};
use eqgames_core::sampling::sample_beta;
use eqgames_core::{GainPolynomial, GameSpec};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID_POINTS: usize = 100_000;
const GRID_LO: f64 = 1e-8;
const GRID_HI: f64 = 1e3;

/// Counts sign changes of `P` on a geometric grid over `[GRID_LO, GRID_HI]`,
/// plus one more if the sign at `GRID_HI` disagrees with the leading
/// coefficient (an odd number of roots beyond the grid).
fn sign_change_count(p: &GainPolynomial, grid: &[f64]) -> usize {
    let mut count = 0;
    let mut last = p.eval(grid[0]).signum();
    for &y in &grid[1..] {
        let s = p.eval(y).signum();
        if s != 0.0 && s != last {
            if last != 0.0 {
                count += 1;
            }
            last = s;
        }
    }
    let lead = p.coeffs().iter().rev().find(|c| **c != 0.0).unwrap().signum();
    if last != lead {
        count += 1;
    }
    count
}

/// All complex roots of `P` via the companion matrix.
fn companion_roots(coeffs: &[f64]) -> Vec<(f64, f64)> {
    let hi = coeffs.iter().rposition(|c| *c != 0.0).unwrap();
    let n = hi;
    if n == 0 {
        return Vec::new();
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[i] / coeffs[hi];
    }
    m.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect()
}

/// Whether every pair of roots in the right half-plane is far enough apart
/// for the grid to separate them, and none sits below the grid.
fn well_separated(coeffs: &[f64]) -> bool {
    let roots: Vec<(f64, f64)> = companion_roots(coeffs)
        .into_iter()
        .filter(|(re, _)| *re > -1e-3)
        .collect();
    for (i, a) in roots.iter().enumerate() {
        let mag = a.0.hypot(a.1);
        if mag < 10.0 * GRID_LO {
            return false;
        }
        for b in &roots[..i] {
            let gap = (a.0 - b.0).hypot(a.1 - b.1);
            if gap < 1e-4_f64.max(1e-3 * mag) {
                return false;
            }
        }
        // a complex pair hugging the positive axis could be seen as a touch
        if a.1 != 0.0 && a.0 > 0.0 && a.1.abs() < 1e-3 * mag {
            return false;
        }
    }
    true
}

#[test]
fn counts_agree_with_sign_change_scan() {
    let ratio = (GRID_HI / GRID_LO).powf(1.0 / (GRID_POINTS - 1) as f64);
    let grid: Vec<f64> = (0..GRID_POINTS).map(|i| GRID_LO * ratio.powi(i as i32)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0;
    let mut skipped = 0;
    for i in 0..10_000u64 {
        let d = rng.random_range(2..=10);
        let r = [0.0, 0.3, 0.8][(i % 3) as usize];
        let batch = sample_beta(d, r, 1, i).unwrap();
        let p = GainPolynomial::from_beta(batch.row(0).to_vec()).unwrap();
        if !well_separated(p.coeffs()) {
            skipped += 1;
            continue;
        }
        let expected = sign_change_count(&p, &grid);
        assert_eq!(count_positive_roots(&p).unwrap(), expected, "beta = {:?}", p.beta());
        checked += 1;
    }
    assert!(checked > 9_000, "only {checked} instances checked ({skipped} skipped)");
}

#[test]
fn located_roots_match_companion_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..2_000 {
        let d = rng.random_range(2..=8);
        let beta: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let p = GainPolynomial::from_beta(beta).unwrap();
        if !well_separated(p.coeffs()) {
            continue;
        }
        let mut eig: Vec<f64> = companion_roots(p.coeffs())
            .into_iter()
            .filter(|(re, im)| *re > 0.0 && im.abs() <= 1e-9 * re.max(1.0))
            .map(|(re, _)| re)
            .collect();
        eig.sort_by(f64::total_cmp);
        let rep = equilibria_of(&p).unwrap();
        assert_eq!(rep.count, eig.len(), "beta = {:?}", p.beta());
        for (y, e) in rep.roots_y.iter().zip(&eig) {
            // the eigenvalues themselves carry conditioning error
            assert!((y - e).abs() <= EPS_ROOT.max(1e-7 * e), "{y} vs {e}");
        }
    }
}

#[test]
fn spec_examples() {
    let linear = find_equilibria(&GameSpec::from_beta(vec![1.0, -1.0]).unwrap()).unwrap();
    assert_eq!(linear.roots_y.len(), 1);
    assert!((linear.roots_y[0] - 1.0).abs() <= EPS_ROOT);
    assert_eq!(linear.stability, vec![Stability::Stable]);

    let quad = find_equilibria(&GameSpec::from_beta(vec![1.0, -3.0, 1.0]).unwrap()).unwrap();
    assert_eq!(quad.count, 2);
    assert!((quad.roots_y[0] - (3.0 - 8f64.sqrt())).abs() <= EPS_ROOT);
    assert!((quad.roots_y[1] - (3.0 + 8f64.sqrt())).abs() <= EPS_ROOT);
    // P'(y) = 2y - 6 is negative at the smaller root
    assert_eq!(quad.stability, vec![Stability::Stable, Stability::Unstable]);

    let positive = find_equilibria(&GameSpec::from_beta(vec![0.5, 2.0, 1.0, 3.0]).unwrap()).unwrap();
    assert_eq!(positive.count, 0);
}
