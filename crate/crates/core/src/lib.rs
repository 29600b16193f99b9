//! Expected numbers of internal and stable equilibria in d-player two-strategy
//! random evolutionary games whose payoff differences are equicorrelated
//! standard Gaussians.
//!
//! The crate offers two independent routes to the same quantity:
//!
//! * an analytic route: the zero density `f(t; r, d)` of the gain polynomial
//!   ([`density`]), its integral `E(r, d) = 2 * int_0^1 f` ([`expected`]) and
//!   large-d approximations ([`asymptotics`]);
//! * a sampling route: correlated coefficient draws ([`sampling`]) whose
//!   positive roots are isolated and classified ([`game`]) and averaged
//!   ([`monte_carlo`]).
//!
//! [`reports`] assembles the tables and figure series built on top of both.

pub mod asymptotics;
pub mod density;
pub mod error;
pub mod expected;
pub mod game;
pub mod legendre;
pub mod monte_carlo;
pub mod quadrature;
pub mod reports;
pub mod sampling;
pub mod special;

pub use asymptotics::{AsymptoticResult, Regime};
pub use density::DensityComponents;
pub use error::{Error, Result};
pub use expected::{ExpectedResult, QuadratureConfig};
pub use game::{EquilibriumReport, GainPolynomial, GameSpec, Stability};
pub use legendre::LegendreEval;
pub use monte_carlo::{Estimate, SimulationConfig, SimulationReport};
pub use sampling::{CorrelationSpec, SampleBatch};

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
