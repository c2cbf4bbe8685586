//! Discretely monitored prices for any number of dates from the continuous
//! price and one low-frequency discrete estimate.
//!
//! cargo run --release --example discrete_interpolation

use barrier_bridge::analytic::{down_and_out_call, BsParams};
use barrier_bridge::estimators::discrete_barrier_interpolate;
use barrier_bridge::model::{validate, MarketModel, OptionSpec, Regime};
use barrier_bridge::{price, RunConfig};

fn main() -> barrier_bridge::Result<()> {
    let q_c = down_and_out_call(&BsParams::new(100.0, 100.0, 0.3, 0.1, 0.5).with_barrier(90.0))?;
    let simulate = |m: usize| -> barrier_bridge::Result<f64> {
        let regime = Regime::free(0.1, vec![0.3], vec![vec![1.0]]).with_lower(0, 90.0);
        let model = MarketModel::constant(vec![100.0], 0.1, 0.5, m, regime)?;
        Ok(price(&validate(&model, &OptionSpec::call(0, 100.0))?, &RunConfig::new(200_000, 8))?.q_s.mean)
    };
    let q16 = simulate(16)?;
    for m in [64, 256] {
        println!(
            "M={m:<4} interpolated {:.4}  simulated {:.4}",
            discrete_barrier_interpolate(q_c, q16, 16, m),
            simulate(m)?
        );
    }
    Ok(())
}
