//! Uneven sampling dates with a different regime per interval: volatility
//! rises and the barrier is raised after the first quarter.
//!
//! cargo run --release --example regime_switching

use std::sync::Arc;

use barrier_bridge::model::{validate, MarketModel, OptionSpec, Regime, TimeGrid};
use barrier_bridge::{price, RunConfig};

fn main() -> barrier_bridge::Result<()> {
    let calm = Arc::new(Regime::free(0.05, vec![0.15], vec![vec![1.0]]).with_lower(0, 85.0));
    let stressed = Arc::new(Regime::free(0.05, vec![0.35], vec![vec![1.0]]).with_lower(0, 90.0));
    let grid = TimeGrid::new(vec![0.0, 0.25, 0.5, 0.75, 1.0])?;
    let model = MarketModel::new(vec![100.0], 0.05, grid, vec![calm, stressed.clone(), stressed.clone(), stressed]);
    let r = price(&validate(&model, &OptionSpec::call(0, 100.0))?, &RunConfig::new(200_000, 6))?;
    let q = r.q_exact.unwrap();
    println!("continuous {:.4} ({:.4}), discrete {:.4}", q.mean, q.std_error, r.q_s.mean);
    Ok(())
}
