//! Knock-out call paying a rebate at maturity when the barrier is hit.
//!
//! cargo run --release --example rebate

use barrier_bridge::estimators::rebate_price;
use barrier_bridge::model::{validate, MarketModel, OptionSpec, Regime};
use barrier_bridge::RunConfig;

fn main() -> barrier_bridge::Result<()> {
    let regime = Regime::free(0.1, vec![0.2], vec![vec![1.0]])
        .with_lower(0, 900.0)
        .with_upper(0, 1100.0);
    let model = MarketModel::constant(vec![1000.0], 0.1, 0.5, 4, regime)?;
    for rebate in [0.0, 5.0, 20.0] {
        let option = OptionSpec::call(0, 1000.0).with_rebate(rebate);
        let r = rebate_price(&validate(&model, &option)?, &RunConfig::new(100_000, 2))?;
        println!(
            "rebate {rebate:>5}: Q_L {:.4}  Q_I {:.4}  Q_U {:.4}",
            r.q_lower.mean, r.q_indep.mean, r.q_upper.mean
        );
    }
    Ok(())
}
