//! One-asset down-and-out call: the bridge-weighted estimator is unbiased at
//! any number of monitoring dates, while the discrete check is not.
//!
//! cargo run --release --example single_barrier

use barrier_bridge::analytic::{down_and_out_call, BsParams};
use barrier_bridge::model::{validate, MarketModel, OptionSpec, Regime};
use barrier_bridge::{price, RunConfig};

fn main() -> barrier_bridge::Result<()> {
    let exact = down_and_out_call(&BsParams::new(100.0, 100.0, 0.3, 0.1, 0.5).with_barrier(90.0))?;
    println!("closed form {exact:.4}");
    println!("{:>5} {:>16} {:>16}", "M", "bridge", "discrete");
    for m in [1, 4, 16, 64] {
        let regime = Regime::free(0.1, vec![0.3], vec![vec![1.0]]).with_lower(0, 90.0);
        let model = MarketModel::constant(vec![100.0], 0.1, 0.5, m, regime)?;
        let problem = validate(&model, &OptionSpec::call(0, 100.0))?;
        let r = price(&problem, &RunConfig::new(200_000, 1))?;
        let q = r.q_exact.expect("one barrier per interval");
        println!(
            "{m:>5} {:>9.4} ({:.3}) {:>9.4} ({:.3})",
            q.mean, q.std_error, r.q_s.mean, r.q_s.std_error
        );
    }
    Ok(())
}
