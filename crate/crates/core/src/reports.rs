//! Tabulated comparisons and plot series built from the analytic and sampling
//! routines. Formatting to text is left to the caller.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{asymptotic_e1, asymptotic_e2, asymptotic_r0};
use crate::density::{density, density_in_x};
use crate::error::{Error, Result};
use crate::expected::{check_model, expected_internal, QuadratureConfig};
use crate::monte_carlo::{simulate, SimulationConfig};

/// Provenance attached to every emitted artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub versions: String,
    pub started: String,
    pub finished: String,
}

/// Group sizes of the comparison tables.
pub const TABLE_D: [usize; 7] = [20, 40, 120, 200, 320, 440, 600];
/// Correlations of the comparison tables.
pub const TABLE_R: [f64; 6] = [0.0, 0.01, 0.1, 0.3, 0.5, 0.8];

/// Which large-d approximation a table compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Approximation {
    /// Integral of the asymptotic density.
    E1,
    /// Closed form with `Gamma(5/4)`.
    E2,
}

impl Approximation {
    /// The approximation at `(r, d)`; `r = 0` always uses `sqrt(2d - 1) / 2`.
    pub fn value(self, r: f64, d: usize, cfg: &QuadratureConfig) -> Result<f64> {
        check_model(r, d)?;
        if r == 0.0 {
            return Ok(asymptotic_r0(d));
        }
        match self {
            Approximation::E1 => asymptotic_e1(r, d, cfg),
            Approximation::E2 => asymptotic_e2(r, d),
        }
    }
}

/// Signed relative deviation `approx / E - 1`.
pub fn relative_deviation(kind: Approximation, r: f64, d: usize, cfg: &QuadratureConfig) -> Result<f64> {
    let exact = expected_internal(r, d, cfg)?.e;
    Ok(kind.value(r, d, cfg)? / exact - 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub d: usize,
    /// `|approx / E - 1|` per entry of [`TABLE_R`]; `None` where a computation failed.
    pub cells: Vec<Option<f64>>,
}

/// `|approx / E - 1|` on the `TABLE_D x TABLE_R` grid.
pub fn deviation_table(kind: Approximation, cfg: &QuadratureConfig) -> Vec<TableRow> {
    TABLE_D
        .par_iter()
        .map(|&d| TableRow {
            d,
            cells: TABLE_R
                .iter()
                .map(|&r| relative_deviation(kind, r, d, cfg).ok().map(f64::abs))
                .collect(),
        })
        .collect()
}

/// Rounds half away from zero to three decimals.
pub fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

/// Grid points for the figure series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureGrid {
    pub d: Vec<usize>,
    pub r: Vec<f64>,
}

fn parse_list(value: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad number '{s}' in grid")))
        };
        match parts.as_slice() {
            [v] => out.push(num(v)?),
            [lo, hi, count] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                let count: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad point count in '{item}'")))?;
                if count < 2 {
                    return Err(Error::InvalidArgument(format!("range '{item}' needs at least 2 points")));
                }
                let step = (hi - lo) / (count - 1) as f64;
                out.extend((0..count).map(|i| if i + 1 == count { hi } else { lo + step * i as f64 }));
            }
            _ => return Err(Error::InvalidArgument(format!("cannot parse grid item '{item}'"))),
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("empty grid list".into()));
    }
    Ok(out)
}

impl FigureGrid {
    /// Parses `d=<list>;r=<list>` where a list holds comma-separated values or
    /// `lo:hi:count` ranges of evenly spaced points. A missing key keeps the
    /// value from `defaults`. Ranges of `d` are rounded and deduplicated.
    pub fn parse(spec: &str, defaults: &FigureGrid) -> Result<FigureGrid> {
        let mut grid = defaults.clone();
        for part in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected key=value in grid, got '{part}'")))?;
            let values = parse_list(value)?;
            match key.trim() {
                "d" => {
                    let mut ds = Vec::new();
                    for v in values {
                        if !(v >= 2.0) || !v.is_finite() {
                            return Err(Error::InvalidArgument(format!("grid d must be at least 2, got {v}")));
                        }
                        let d = v.round() as usize;
                        if ds.last() != Some(&d) {
                            ds.push(d);
                        }
                    }
                    grid.d = ds;
                }
                "r" => {
                    if let Some(bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                        return Err(Error::InvalidArgument(format!("grid r must lie in [0, 1], got {bad}")));
                    }
                    grid.r = values;
                }
                other => return Err(Error::InvalidArgument(format!("unknown grid key '{other}'"))),
            }
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FigureKind {
    EVsR,
    EVsD,
    Ratios,
}

impl FigureKind {
    pub fn default_grid(self) -> FigureGrid {
        let evenly = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
            (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
        };
        match self {
            FigureKind::EVsR => FigureGrid {
                d: vec![3, 4, 5, 10, 20],
                r: evenly(0.0, 1.0, 21),
            },
            FigureKind::EVsD => FigureGrid {
                d: (2..=50).collect(),
                r: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            },
            FigureKind::Ratios => FigureGrid {
                d: (1..=30).map(|k| 20 * k).collect(),
                r: vec![0.1, 0.3, 0.5, 0.8],
            },
        }
    }
}

/// One point of a long-format series; `y` is `None` where the value failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub series: String,
    pub x: f64,
    pub y: Option<f64>,
}

fn e_or_none(r: f64, d: usize, cfg: &QuadratureConfig) -> Option<f64> {
    expected_internal(r, d, cfg).ok().map(|res| res.e)
}

/// Analytic curves for `kind` on `grid`.
///
/// * `EVsR`: one series `E d=<d>` per group size, `x = r`.
/// * `EVsD`: one series `E r=<r>` per correlation, `x = d`.
/// * `Ratios`: series `E1/E r=<r>` and `E2/E r=<r>`, `x = d`.
pub fn figure_series(kind: FigureKind, grid: &FigureGrid, cfg: &QuadratureConfig) -> Vec<SeriesPoint> {
    match kind {
        FigureKind::EVsR => grid
            .d
            .par_iter()
            .flat_map_iter(|&d| {
                grid.r.iter().map(move |&r| SeriesPoint {
                    series: format!("E d={d}"),
                    x: r,
                    y: e_or_none(r, d, cfg),
                })
            })
            .collect(),
        FigureKind::EVsD => grid
            .r
            .par_iter()
            .flat_map_iter(|&r| {
                grid.d.iter().map(move |&d| SeriesPoint {
                    series: format!("E r={r}"),
                    x: d as f64,
                    y: e_or_none(r, d, cfg),
                })
            })
            .collect(),
        FigureKind::Ratios => grid
            .r
            .par_iter()
            .flat_map_iter(|&r| {
                [Approximation::E1, Approximation::E2].into_iter().flat_map(move |kind| {
                    let label = match kind {
                        Approximation::E1 => "E1/E",
                        Approximation::E2 => "E2/E",
                    };
                    grid.d.iter().map(move |&d| SeriesPoint {
                        series: format!("{label} r={r}"),
                        x: d as f64,
                        y: relative_deviation(kind, r, d, cfg).ok().map(|v| v + 1.0),
                    })
                })
            })
            .collect(),
    }
}

/// Monte Carlo companion of the `EVsR` curves: series `simulated d=<d>` with
/// the sample mean as `y`. Each cell uses `seed` unchanged.
pub fn simulated_series(grid: &FigureGrid, samples: usize, seed: u64, workers: usize) -> Result<Vec<SeriesPoint>> {
    let mut out = Vec::with_capacity(grid.d.len() * grid.r.len());
    for &d in &grid.d {
        for &r in &grid.r {
            let cfg = SimulationConfig::new(d, r, samples, seed).with_workers(workers);
            out.push(SeriesPoint {
                series: format!("simulated d={d}"),
                x: r,
                y: Some(simulate(&cfg)?.e_hat.mean),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinate {
    /// `f(t)` on `t` in `[0, 1]`.
    T,
    /// `g(y)` on the frequency coordinate `y` in `[0, 1]`.
    X,
}

/// Density sampled on `points` evenly spaced abscissae covering `[0, 1]`.
///
/// The upper half of the grid is computed as `1 - s` of the lower half so the
/// two halves mirror each other to rounding.
pub fn density_grid(d: usize, r: f64, points: usize, coord: Coordinate) -> Result<Vec<(f64, f64)>> {
    check_model(r, d)?;
    if points < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 points, got {points}")));
    }
    let last = points - 1;
    let abscissa = |i: usize| {
        if 2 * i <= last {
            i as f64 / last as f64
        } else {
            1.0 - (last - i) as f64 / last as f64
        }
    };
    Ok((0..points)
        .map(|i| {
            let s = abscissa(i);
            let v = match coord {
                Coordinate::T => density(s, r, d),
                Coordinate::X => density_in_x(s, r, d),
            };
            (s, v)
        })
        .collect())
}
