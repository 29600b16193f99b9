//! Equicorrelated standard-Gaussian coefficient vectors.
//!
//! Rows are produced by the one-factor construction
//! `Y_i = sqrt(r) Z_0 + sqrt(1 - r) Z_i` with i.i.d. standard normals, which is
//! exact for the covariance `(1 - r) I + r 11^T` and stays well defined at
//! `r = 1`. A general Cholesky path covers arbitrary covariances.
//!
//! Work is split into `workers` contiguous row blocks. Block `w` draws from a
//! ChaCha8 generator seeded with `seed` on stream `w`, so a batch depends only
//! on `(d, r, n, seed, workers)`, never on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Source of the effective coefficient correlation `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorrelationSpec {
    Direct {
        r: f64,
    },
    /// Payoff-level correlations with common payoff variance `eta2`.
    Payoff {
        r_a: f64,
        r_b: f64,
        /// Cross-strategy correlation for different group compositions.
        r_ab: f64,
        /// Cross-strategy correlation for the same group composition.
        r_ab_same: f64,
        eta2: f64,
    },
}

/// Correlation between distinct `beta_i = a_i - b_i`.
///
/// For payoff-level input this is `(r_a + r_b - 2 r_ab) / (2 (1 - r_ab_same))`,
/// which does not depend on `eta2`.
pub fn effective_correlation(spec: &CorrelationSpec) -> Result<f64> {
    let r = match *spec {
        CorrelationSpec::Direct { r } => r,
        CorrelationSpec::Payoff {
            r_a,
            r_b,
            r_ab,
            r_ab_same,
            eta2,
        } => {
            for (name, v) in [("r_a", r_a), ("r_b", r_b)] {
                if !(-1.0..=1.0).contains(&v) {
                    return Err(Error::InvalidArgument(format!("{name} must lie in [-1, 1], got {v}")));
                }
            }
            if !(eta2 > 0.0) || !r_ab.is_finite() {
                return Err(Error::InvalidArgument("eta2 must be positive and r_ab finite".into()));
            }
            if !(r_ab_same < 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "r_ab_same must be below 1, got {r_ab_same}"
                )));
            }
            (r_a + r_b - 2.0 * r_ab) / (2.0 * (1.0 - r_ab_same))
        }
    };
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfModelRange(r));
    }
    Ok(r)
}

/// `n` coefficient vectors of length `d`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub d: usize,
    pub r: f64,
    pub n: usize,
    pub seed: u64,
    pub workers: usize,
    pub beta_rows: Vec<f64>,
}

impl SampleBatch {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.beta_rows[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.beta_rows.chunks_exact(self.d)
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.rows().map(|row| row[k]).collect()
    }
}

pub(crate) fn check_sampling(d: usize, r: f64, n: usize, workers: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("d must be at least 2, got {d}")));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("r must lie in [0, 1], got {r}")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    if workers == 0 {
        return Err(Error::InvalidArgument("need at least one worker".into()));
    }
    Ok(())
}

/// Row range `[start, end)` handled by `worker`.
pub(crate) fn worker_range(n: usize, workers: usize, worker: usize) -> (usize, usize) {
    let start = n * worker / workers;
    let end = n * (worker + 1) / workers;
    (start, end)
}

/// Generator for one worker's block.
pub(crate) fn worker_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64);
    rng
}

/// Fills `row` with one equicorrelated draw.
pub(crate) fn one_factor_row(rng: &mut ChaCha8Rng, r: f64, row: &mut [f64]) {
    let shared = r.sqrt();
    let own = (1.0 - r).sqrt();
    let z0: f64 = StandardNormal.sample(rng);
    for y in row.iter_mut() {
        let z: f64 = StandardNormal.sample(rng);
        *y = shared * z0 + own * z;
    }
}

/// Draws `n` equicorrelated rows on one worker.
pub fn sample_beta(d: usize, r: f64, n: usize, seed: u64) -> Result<SampleBatch> {
    sample_beta_with_workers(d, r, n, seed, 1)
}

/// Draws `n` equicorrelated rows split over `workers` independent streams.
pub fn sample_beta_with_workers(d: usize, r: f64, n: usize, seed: u64, workers: usize) -> Result<SampleBatch> {
    check_sampling(d, r, n, workers)?;
    let blocks: Vec<Vec<f64>> = (0..workers)
        .into_par_iter()
        .map(|w| {
            let (start, end) = worker_range(n, workers, w);
            let mut rng = worker_rng(seed, w);
            let mut block = vec![0.0; (end - start) * d];
            for row in block.chunks_exact_mut(d) {
                one_factor_row(&mut rng, r, row);
            }
            block
        })
        .collect();
    Ok(SampleBatch {
        d,
        r,
        n,
        seed,
        workers,
        beta_rows: blocks.concat(),
    })
}

/// Lower-triangular `L` with `L L^T = cov`, row-major.
///
/// Pivots down to `-1e-8 * max diag` are clamped to zero, which admits
/// semidefinite matrices such as the `r = 1` equicorrelation.
pub fn cholesky_clamped(cov: &[Vec<f64>]) -> Result<Vec<f64>> {
    let d = cov.len();
    if d == 0 || cov.iter().any(|row| row.len() != d) {
        return Err(Error::InvalidArgument("covariance must be a non-empty square matrix".into()));
    }
    let scale = (0..d).map(|i| cov[i][i].abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for i in 0..d {
        for j in 0..i {
            if !cov[i][j].is_finite() || (cov[i][j] - cov[j][i]).abs() > 1e-12 * scale {
                return Err(Error::InvalidArgument("covariance must be finite and symmetric".into()));
            }
        }
    }
    let mut l = vec![0.0; d * d];
    for j in 0..d {
        let mut pivot = cov[j][j];
        for k in 0..j {
            pivot -= l[j * d + k] * l[j * d + k];
        }
        if pivot < -1e-8 * scale {
            return Err(Error::NotPsd { index: j, pivot });
        }
        let ljj = pivot.max(0.0).sqrt();
        l[j * d + j] = ljj;
        for i in j + 1..d {
            let mut s = cov[i][j];
            for k in 0..j {
                s -= l[i * d + k] * l[j * d + k];
            }
            // A zero pivot means column j is already spanned; leave it empty.
            l[i * d + j] = if ljj > 0.0 { s / ljj } else { 0.0 };
        }
    }
    Ok(l)
}

/// Draws `n` rows with covariance `cov` through its clamped Cholesky factor.
/// The returned batch has `r` set to NaN.
pub fn sample_beta_general(cov: &[Vec<f64>], n: usize, seed: u64) -> Result<SampleBatch> {
    let l = cholesky_clamped(cov)?;
    let d = cov.len();
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let mut rng = worker_rng(seed, 0);
    let mut beta_rows = vec![0.0; n * d];
    let mut z = vec![0.0; d];
    for row in beta_rows.chunks_exact_mut(d) {
        for zi in z.iter_mut() {
            *zi = StandardNormal.sample(&mut rng);
        }
        for i in 0..d {
            row[i] = (0..=i).map(|k| l[i * d + k] * z[k]).sum();
        }
    }
    Ok(SampleBatch {
        d,
        r: f64::NAN,
        n,
        seed,
        workers: 1,
        beta_rows,
    })
}

/// `(1 - r) I + r 11^T`.
pub fn equicorrelation_matrix(d: usize, r: f64) -> Vec<Vec<f64>> {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { r }).collect())
        .collect()
}
