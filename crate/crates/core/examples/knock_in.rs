//! Knock-in pricing and in-out parity on shared paths.
//!
//! cargo run --release --example knock_in

use barrier_bridge::estimators::knock_in_price;
use barrier_bridge::model::{validate, MarketModel, OptionSpec, Regime};
use barrier_bridge::{price, RunConfig};

fn main() -> barrier_bridge::Result<()> {
    let regime = Regime::free(0.1, vec![0.3, 0.3], Regime::equicorrelation(2, 0.5))
        .with_lower(0, 90.0)
        .with_lower(1, 90.0);
    let model = MarketModel::constant(vec![100.0, 100.0], 0.1, 1.0, 8, regime)?;
    let problem = validate(&model, &OptionSpec::call(0, 100.0))?;
    let cfg = RunConfig::new(100_000, 5);
    let out = price(&problem, &cfg)?;
    let inn = knock_in_price(&problem, &cfg)?;
    println!("knock-out  [{:.4}, {:.4}]", out.q_lower.mean, out.q_upper.mean);
    println!("knock-in   [{:.4}, {:.4}]", inn.q_lower.mean, inn.q_upper.mean);
    println!("vanilla     {:.4}", out.vanilla.mean);
    println!("KO_L + KI_U {:.4}", out.q_lower.mean + inn.q_upper.mean);
    Ok(())
}
