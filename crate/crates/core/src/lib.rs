//! Monte Carlo pricing of multi-asset options with continuously monitored
//! knock-out and knock-in barriers.
//!
//! Paths are simulated only at the sampling dates. Between dates the exact
//! conditional probability that a Brownian bridge stays clear of a barrier
//! replaces the discrete check, which removes the monitoring bias when each
//! interval carries one barrier. With several barriers per interval the
//! joint no-hit probability is replaced by its Frechet lower and upper
//! bounds and by the independence product, which bracket the continuous
//! price and converge to it as the grid is refined.
//!
//! ```no_run
//! use barrier_bridge::{estimators, model::*};
//!
//! let regime = Regime::free(0.1, vec![0.3], vec![vec![1.0]]).with_lower(0, 90.0);
//! let model = MarketModel::constant(vec![100.0], 0.1, 0.5, 1, regime)?;
//! let problem = validate(&model, &OptionSpec::call(0, 100.0))?;
//! let report = estimators::price(&problem, &estimators::RunConfig::new(400_000, 1))?;
//! println!("{:.3} +- {:.3}", report.q_exact.unwrap().mean, report.q_exact.unwrap().std_error);
//! # Ok::<(), barrier_bridge::Error>(())
//! ```

pub mod analytic;
pub mod bridge;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod model;
pub mod normal;
pub mod simulate;
pub mod stats;

pub use error::{Error, Result};
pub use estimators::{price, PricingReport, RunConfig};
pub use model::{validate, MarketModel, OptionSpec, Regime, Validated};
