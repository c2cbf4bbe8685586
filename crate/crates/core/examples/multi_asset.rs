//! Down-and-out call on the first of three correlated assets, each with its
//! own lower barrier. No closed form exists; the bounds close in as the grid
//! is refined.
//!
//! cargo run --release --example multi_asset

use barrier_bridge::model::{validate, MarketModel, OptionSpec, Regime};
use barrier_bridge::{price, RunConfig};

fn main() -> barrier_bridge::Result<()> {
    let d = 3;
    for m in [1, 4, 16, 64] {
        let mut regime = Regime::free(0.05, vec![0.4; d], Regime::equicorrelation(d, 0.5));
        for k in 0..d {
            regime = regime.with_lower(k, 80.0);
        }
        let model = MarketModel::constant(vec![100.0; d], 0.05, 1.0, m, regime)?;
        let r = price(&validate(&model, &OptionSpec::call(0, 100.0))?, &RunConfig::new(50_000, 3))?;
        println!(
            "M={m:<3} Q_L {:.3}  Q_I {:.3}  Q_U {:.3}  Q_S {:.3}  Q_2 {:.3} ({:.3})  gap {:.4} ({:.4})",
            r.q_lower.mean, r.q_indep.mean, r.q_upper.mean, r.q_s.mean, r.q2.value, r.q2.std_error, r.gap.mean, r.gap.std_error
        );
    }
    Ok(())
}
