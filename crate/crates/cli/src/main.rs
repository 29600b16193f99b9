//! `eqgames`: expected numbers of internal equilibria in random multi-player
//! games, analytic and simulated.

mod manifest;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use eqgames_core::asymptotics::{bernstein_asymptote, bernstein_expected_real_zeros};
use eqgames_core::expected::expected_internal;
use eqgames_core::monte_carlo::{simulate, SimulationConfig};
use eqgames_core::reports::{
    deviation_table, density_grid, figure_series, relative_deviation, simulated_series, Approximation, Coordinate,
    FigureGrid, FigureKind, SeriesPoint, TABLE_D, TABLE_R,
};
use eqgames_core::{Error, QuadratureConfig};
use serde_json::{json, Value};

use crate::manifest::{csv_comments, ManifestBuilder};

const EXIT_USAGE: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(name = "eqgames", version, about = "Expected (stable) internal equilibria of random d-player games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoordArg {
    T,
    X,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    EVsR,
    EVsD,
    Ratios,
}

#[derive(Subcommand)]
enum Command {
    /// E(r, d) and SE(r, d) by adaptive quadrature (JSON).
    Expected {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: f64,
        /// Absolute and relative quadrature tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 2000)]
        max_subdivisions: usize,
    },
    /// Zero density sampled on a uniform grid over [0, 1] (CSV).
    Density {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        points: usize,
        #[arg(long, value_enum, default_value = "t")]
        coord: CoordArg,
    },
    /// Monte Carlo estimates from sampled games (JSON).
    Simulate {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, env = "EQGAMES_WORKERS", default_value_t = 1)]
        workers: usize,
    },
    /// |approximation / E - 1| on the comparison grid (CSV, 3 decimals).
    Table {
        /// 1 for the integrated asymptotic density, 2 for the closed form.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        paper: u8,
        /// Print approximation / E - 1 with its sign.
        #[arg(long)]
        signed: bool,
    },
    /// Plot data in long format `series,x,y` (CSV).
    Figure {
        #[arg(long, value_enum)]
        which: WhichArg,
        /// Grid such as `d=3,5;r=0:1:21` (ranges are lo:hi:count).
        #[arg(long)]
        grid: Option<String>,
        /// Add simulated series with this many samples per point (e-vs-r only).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, env = "EQGAMES_WORKERS", default_value_t = 1)]
        workers: usize,
    },
    /// Expected real zeros of a random Bernstein polynomial (JSON).
    Bernstein {
        #[arg(long)]
        degree: usize,
    },
}

/// Failure of a command: exit status and message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ConvergenceFailure { .. } => EXIT_NO_CONVERGENCE,
            Error::InvalidArgument(_) | Error::InvalidGame(_) | Error::OutOfModelRange(_) => EXIT_USAGE,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON values always serialize"));
}

fn opt_num(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |y| y.to_string())
}

fn run_expected(d: usize, r: f64, tol: f64, max_subdivisions: usize) -> Result<(), Failure> {
    let builder = ManifestBuilder::new("expected")
        .param("d", d)
        .param("r", r)
        .param("tol", tol)
        .param("max_subdivisions", max_subdivisions);
    let cfg = QuadratureConfig {
        max_subdivisions,
        ..QuadratureConfig::with_tol(tol)
    };
    let (e, est_error, converged, failure) = match expected_internal(r, d, &cfg) {
        Ok(res) => (res.e, res.est_error, true, None),
        Err(Error::ConvergenceFailure {
            value,
            est_error,
            subdivisions,
        }) => (
            value,
            est_error,
            false,
            Some(Failure::from(Error::ConvergenceFailure {
                value,
                est_error,
                subdivisions,
            })),
        ),
        Err(other) => return Err(other.into()),
    };
    print_json(&json!({
        "d": d,
        "r": r,
        "E": e,
        "SE": e / 2.0,
        "est_error": est_error,
        "converged": converged,
        "manifest": builder.finish(),
    }));
    failure.map_or(Ok(()), Err)
}

fn run_density(d: usize, r: f64, points: usize, coord: CoordArg) -> Result<(), Failure> {
    let builder = ManifestBuilder::new("density").param("d", d).param("r", r).param("points", points);
    let (coordinate, header, builder) = match coord {
        CoordArg::T => (Coordinate::T, "t,f", builder.param("coord", "t")),
        CoordArg::X => (Coordinate::X, "y,g", builder.param("coord", "x")),
    };
    let rows = density_grid(d, r, points, coordinate)?;
    let mut out = csv_comments(&builder.finish());
    out.push_str(header);
    out.push('\n');
    for (s, v) in rows {
        writeln!(out, "{s},{v}").unwrap();
    }
    print!("{out}");
    Ok(())
}

fn run_simulate(d: usize, r: f64, samples: usize, seed: u64, workers: usize) -> Result<(), Failure> {
    let builder = ManifestBuilder::new("simulate")
        .param("d", d)
        .param("r", r)
        .param("samples", samples)
        .param("workers", workers)
        .seed(seed);
    let rep = simulate(&SimulationConfig {
        d,
        r,
        n_samples: samples,
        seed,
        workers,
    })?;
    let mut value = serde_json::to_value(&rep).expect("report serializes");
    value["manifest"] = serde_json::to_value(builder.finish()).expect("manifest serializes");
    print_json(&value);
    Ok(())
}

fn run_table(paper: u8, signed: bool) -> Result<(), Failure> {
    let builder = ManifestBuilder::new("table").param("paper", paper).param("signed", signed);
    let kind = if paper == 1 { Approximation::E1 } else { Approximation::E2 };
    let cfg = QuadratureConfig::default();
    let rows: Vec<(usize, Vec<Option<f64>>)> = if signed {
        TABLE_D
            .iter()
            .map(|&d| {
                let cells = TABLE_R
                    .iter()
                    .map(|&r| relative_deviation(kind, r, d, &cfg).ok())
                    .collect();
                (d, cells)
            })
            .collect()
    } else {
        deviation_table(kind, &cfg).into_iter().map(|row| (row.d, row.cells)).collect()
    };
    let mut out = csv_comments(&builder.finish());
    out.push('d');
    for r in TABLE_R {
        write!(out, ",{r}").unwrap();
    }
    out.push('\n');
    for (d, cells) in rows {
        write!(out, "{d}").unwrap();
        for cell in cells {
            match cell {
                Some(v) => write!(out, ",{v:.3}").unwrap(),
                None => out.push_str(",NA"),
            }
        }
        out.push('\n');
    }
    print!("{out}");
    Ok(())
}

fn run_figure(
    which: WhichArg,
    grid: Option<String>,
    samples: Option<usize>,
    seed: u64,
    workers: usize,
) -> Result<(), Failure> {
    let (kind, name) = match which {
        WhichArg::EVsR => (FigureKind::EVsR, "e-vs-r"),
        WhichArg::EVsD => (FigureKind::EVsD, "e-vs-d"),
        WhichArg::Ratios => (FigureKind::Ratios, "ratios"),
    };
    let mut builder = ManifestBuilder::new("figure").param("which", name);
    let grid = match &grid {
        Some(spec) => {
            builder = builder.param("grid", spec);
            FigureGrid::parse(spec, &kind.default_grid())?
        }
        None => kind.default_grid(),
    };
    let cfg = QuadratureConfig::default();
    let mut points: Vec<SeriesPoint> = figure_series(kind, &grid, &cfg);
    if let Some(n) = samples {
        if kind != FigureKind::EVsR {
            return Err(usage("--samples only applies to --which e-vs-r"));
        }
        builder = builder.param("samples", n).param("workers", workers).seed(seed);
        points.extend(simulated_series(&grid, n, seed, workers)?);
    }
    let mut out = csv_comments(&builder.finish());
    out.push_str("series,x,y\n");
    for p in points {
        writeln!(out, "{},{},{}", p.series, p.x, opt_num(p.y)).unwrap();
    }
    print!("{out}");
    Ok(())
}

fn run_bernstein(degree: usize) -> Result<(), Failure> {
    let builder = ManifestBuilder::new("bernstein").param("degree", degree);
    let value = bernstein_expected_real_zeros(degree, &QuadratureConfig::default())?;
    print_json(&json!({
        "degree": degree,
        "expected_real_zeros": value,
        "asymptote": bernstein_asymptote(degree),
        "manifest": builder.finish(),
    }));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Expected {
            d,
            r,
            tol,
            max_subdivisions,
        } => run_expected(d, r, tol, max_subdivisions),
        Command::Density { d, r, points, coord } => run_density(d, r, points, coord),
        Command::Simulate {
            d,
            r,
            samples,
            seed,
            workers,
        } => run_simulate(d, r, samples, seed, workers),
        Command::Table { paper, signed } => run_table(paper, signed),
        Command::Figure {
            which,
            grid,
            samples,
            seed,
            workers,
        } => run_figure(which, grid, samples, seed, workers),
        Command::Bernstein { degree } => run_bernstein(degree),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("eqgames: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
