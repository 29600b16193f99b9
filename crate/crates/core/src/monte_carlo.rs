//! Monte Carlo estimates of the number of (stable) internal equilibria.
//!
//! Each worker draws its block of coefficient rows (see [`crate::sampling`]),
//! isolates the positive roots of every row and keeps integer tallies. Tallies
//! are merged in worker order, and since they are integers the report is
//! identical for identical configurations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{equilibria_of, GainPolynomial};
use crate::sampling::{check_sampling, one_factor_row, sample_beta_with_workers, worker_range, worker_rng, SampleBatch};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub d: usize,
    pub r: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub workers: usize,
}

impl SimulationConfig {
    pub fn new(d: usize, r: f64, n_samples: usize, seed: u64) -> Self {
        Self {
            d,
            r,
            n_samples,
            seed,
            workers: 1,
        }
    }

    pub fn with_workers(self, workers: usize) -> Self {
        Self { workers, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        check_sampling(self.d, self.r, self.n_samples, self.workers)
    }
}

/// A sample mean with its standard error `sd / sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

impl Estimate {
    /// From the sum and sum of squares of `n` integer observations. The sample
    /// variance uses the `n - 1` denominator.
    fn from_integer_sums(sum: i64, sum_sq: i64, n: usize) -> Self {
        if n == 0 {
            return Self {
                mean: f64::NAN,
                stderr: f64::NAN,
                n,
            };
        }
        let nf = n as f64;
        let mean = sum as f64 / nf;
        let stderr = if n < 2 {
            0.0
        } else {
            let spread = n as i128 * sum_sq as i128 - (sum as i128) * (sum as i128);
            (spread as f64 / (nf * (nf - 1.0)) / nf).sqrt()
        };
        Self { mean, stderr, n }
    }

    fn scaled(self, factor: f64) -> Self {
        Self {
            mean: self.mean * factor,
            stderr: self.stderr * factor.abs(),
            n: self.n,
        }
    }

    /// `|mean - target| <= k * stderr`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    /// Fraction of effective samples with exactly `m` internal equilibria,
    /// `m = 0..d-1`.
    pub p_hat: Vec<f64>,
    #[serde(rename = "E_hat")]
    pub e_hat: Estimate,
    #[serde(rename = "SE_hat")]
    pub se_hat: Estimate,
    /// Per-sample `stable - count / 2`, whose mean is zero when stable and
    /// unstable equilibria are equally frequent.
    pub stable_minus_half: Estimate,
    pub skipped: usize,
    pub n_effective: usize,
    /// Roots whose stability could not be resolved; not counted as stable.
    pub indeterminate: usize,
}

#[derive(Debug, Clone, Default)]
struct Tally {
    histogram: Vec<u64>,
    count: i64,
    count_sq: i64,
    stable: i64,
    stable_sq: i64,
    // 2 * stable - count, kept integral
    gap: i64,
    gap_sq: i64,
    skipped: usize,
    indeterminate: usize,
}

impl Tally {
    fn new(d: usize) -> Self {
        Self {
            histogram: vec![0; d],
            ..Self::default()
        }
    }

    fn add_row(&mut self, row: &[f64]) {
        let report = GainPolynomial::from_beta(row.to_vec()).and_then(|p| equilibria_of(&p));
        match report {
            Ok(rep) if !rep.near_degenerate => {
                let c = rep.count as i64;
                let s = rep.stable_count as i64;
                self.histogram[rep.count] += 1;
                self.count += c;
                self.count_sq += c * c;
                self.stable += s;
                self.stable_sq += s * s;
                let g = 2 * s - c;
                self.gap += g;
                self.gap_sq += g * g;
                self.indeterminate += rep.indeterminate_count;
            }
            Ok(_) | Err(Error::AllCoefficientsZero) => self.skipped += 1,
            Err(e) => panic!("coefficient rows are validated upstream: {e}"),
        }
    }

    fn merge(mut self, other: &Tally) -> Self {
        for (a, b) in self.histogram.iter_mut().zip(&other.histogram) {
            *a += b;
        }
        self.count += other.count;
        self.count_sq += other.count_sq;
        self.stable += other.stable;
        self.stable_sq += other.stable_sq;
        self.gap += other.gap;
        self.gap_sq += other.gap_sq;
        self.skipped += other.skipped;
        self.indeterminate += other.indeterminate;
        self
    }

    fn report(&self) -> SimulationReport {
        let n_effective: u64 = self.histogram.iter().sum();
        let n = n_effective as usize;
        let p_hat = self
            .histogram
            .iter()
            .map(|&h| if n == 0 { 0.0 } else { h as f64 / n as f64 })
            .collect();
        SimulationReport {
            p_hat,
            e_hat: Estimate::from_integer_sums(self.count, self.count_sq, n),
            se_hat: Estimate::from_integer_sums(self.stable, self.stable_sq, n),
            stable_minus_half: Estimate::from_integer_sums(self.gap, self.gap_sq, n).scaled(0.5),
            skipped: self.skipped,
            n_effective: n,
            indeterminate: self.indeterminate,
        }
    }
}

/// Counts equilibria of every row of a row-major `d`-column matrix.
/// Rows with all-zero or negligible end coefficients are skipped.
pub fn tally_rows(d: usize, rows: &[f64]) -> Result<SimulationReport> {
    if d < 2 || !rows.len().is_multiple_of(d) {
        return Err(Error::InvalidArgument(format!(
            "expected rows of length d >= 2, got {} values for d = {d}",
            rows.len()
        )));
    }
    let mut tally = Tally::new(d);
    for row in rows.chunks_exact(d) {
        tally.add_row(row);
    }
    Ok(tally.report())
}

/// Draws `n_samples` games and tallies their internal and stable equilibria.
pub fn simulate(cfg: &SimulationConfig) -> Result<SimulationReport> {
    cfg.validate()?;
    let tallies: Vec<Tally> = (0..cfg.workers)
        .into_par_iter()
        .map(|w| {
            let (start, end) = worker_range(cfg.n_samples, cfg.workers, w);
            let mut rng = worker_rng(cfg.seed, w);
            let mut row = vec![0.0; cfg.d];
            let mut tally = Tally::new(cfg.d);
            for _ in start..end {
                one_factor_row(&mut rng, cfg.r, &mut row);
                tally.add_row(&row);
            }
            tally
        })
        .collect();
    let merged = tallies.iter().fold(Tally::new(cfg.d), |acc, t| acc.merge(t));
    Ok(merged.report())
}

/// Mean number of stable equilibria per game.
pub fn simulate_stable_fraction(cfg: &SimulationConfig) -> Result<Estimate> {
    Ok(simulate(cfg)?.se_hat)
}

/// Per-coefficient skewness of a sampled batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryDiagnostics {
    /// `None` for columns with zero variance, which are excluded.
    pub skewness: Vec<Option<f64>>,
    /// `4 sqrt(6 / n)`.
    pub bound: f64,
    pub flagged: Vec<usize>,
    pub passed: bool,
}

fn skewness(xs: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let (mut m2, mut m3) = (0.0, 0.0);
    for x in xs {
        let dx = x - mean;
        m2 += dx * dx;
        m3 += dx * dx * dx;
    }
    m2 /= n;
    m3 /= n;
    if m2 <= f64::EPSILON * mean.abs().max(1.0).powi(2) {
        return None;
    }
    Some(m3 / m2.powf(1.5))
}

/// Skewness of each column of `batch`, checked against `4 sqrt(6 / n)`.
pub fn batch_symmetry(batch: &SampleBatch) -> SymmetryDiagnostics {
    let bound = 4.0 * (6.0 / batch.n as f64).sqrt();
    let skew: Vec<Option<f64>> = (0..batch.d).map(|k| skewness(&batch.column(k))).collect();
    let flagged: Vec<usize> = skew
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_none())
        .map(|(k, _)| k)
        .collect();
    let passed = skew.iter().flatten().all(|s| s.abs() < bound);
    SymmetryDiagnostics {
        skewness: skew,
        bound,
        flagged,
        passed,
    }
}

/// Draws the batch described by `cfg` and reports [`batch_symmetry`].
pub fn beta_symmetry_check(cfg: &SimulationConfig) -> Result<SymmetryDiagnostics> {
    cfg.validate()?;
    let batch = sample_beta_with_workers(cfg.d, cfg.r, cfg.n_samples, cfg.seed, cfg.workers)?;
    Ok(batch_symmetry(&batch))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimate_from_sums() {
        // observations 0, 1, 1, 2
        let e = Estimate::from_integer_sums(4, 6, 4);
        assert_eq!(e.mean, 1.0);
        let sd = (2.0f64 / 3.0).sqrt();
        assert!((e.stderr - sd / 2.0).abs() < 1e-15);
        assert!(e.within(1.5, 2.0) && !e.within(1.5, 1.0));
    }

    #[test]
    fn fully_correlated_games_have_no_interior_equilibria() {
        let rep = simulate(&SimulationConfig::new(2, 1.0, 500, 3)).unwrap();
        assert_eq!(rep.e_hat.mean, 0.0);
        assert_eq!(rep.p_hat, vec![1.0, 0.0]);
        assert_eq!(rep.skipped, 0);
        assert_eq!(rep.n_effective, 500);
    }

    #[test]
    fn report_invariants() {
        let rep = simulate(&SimulationConfig::new(6, 0.2, 3000, 8).with_workers(3)).unwrap();
        assert_eq!(rep.p_hat.len(), 6);
        let total: f64 = rep.p_hat.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        let mean: f64 = rep.p_hat.iter().enumerate().map(|(m, p)| m as f64 * p).sum();
        assert!((mean - rep.e_hat.mean).abs() < 1e-12);
        assert!(rep.se_hat.mean <= rep.e_hat.mean);
        assert_eq!(rep.n_effective + rep.skipped, 3000);
    }

    #[test]
    fn deterministic_for_fixed_config() {
        let cfg = SimulationConfig::new(4, 0.5, 2000, 77).with_workers(4);
        assert_eq!(simulate(&cfg).unwrap(), simulate(&cfg).unwrap());
    }

    #[test]
    fn crafted_rows() {
        // quadratic gain polynomials whose end coefficients share a sign have
        // an even number of positive roots
        let rows = [
            1.0, -3.0, 1.0, //
            1.0, 0.2, 1.0, //
            2.0, -5.0, 0.5, //
            -1.0, 4.0, -1.0, //
            0.0, 0.0, 0.0,
        ];
        let rep = tally_rows(3, &rows).unwrap();
        assert_eq!(rep.skipped, 1);
        assert_eq!(rep.n_effective, 4);
        assert_eq!(rep.p_hat, vec![0.25, 0.0, 0.75]);
        assert_eq!(rep.se_hat.mean, 0.75);
        assert_eq!(rep.stable_minus_half.mean, 0.0);
        assert!(tally_rows(3, &rows[..4]).is_err());
    }

    #[test]
    fn constant_column_is_flagged() {
        let mut batch = sample_beta_with_workers(4, 0.5, 10_000, 1, 2).unwrap();
        for row in batch.beta_rows.chunks_exact_mut(4) {
            row[2] = 0.7;
        }
        let diag = batch_symmetry(&batch);
        assert_eq!(diag.flagged, vec![2]);
        assert!(diag.skewness[2].is_none());
        assert!(diag.passed);
    }

    #[test]
    fn skewness_within_bound() {
        for r in [0.0, 0.5] {
            let diag = beta_symmetry_check(&SimulationConfig::new(4, r, 100_000, 12)).unwrap();
            assert!((diag.bound - 0.031).abs() < 1e-3);
            assert!(diag.passed, "{diag:?}");
            assert!(diag.flagged.is_empty());
        }
    }

    #[test]
    fn invalid_config() {
        assert!(simulate(&SimulationConfig::new(1, 0.0, 10, 0)).is_err());
        assert!(simulate(&SimulationConfig::new(3, 0.0, 0, 0)).is_err());
        assert!(simulate(&SimulationConfig::new(3, 0.0, 10, 0).with_workers(0)).is_err());
    }
}
