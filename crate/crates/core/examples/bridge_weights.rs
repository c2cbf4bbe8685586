//! Per-interval no-hit weights for two correlated assets against a
//! brute-force fine-grid bridge.
//!
//! cargo run --release --example bridge_weights

use barrier_bridge::bridge::oracle::oracle_no_hit;
use barrier_bridge::bridge::{interval_weights, IntervalContext};
use barrier_bridge::model::Regime;

fn main() {
    for rho in [-0.9, 0.0, 0.9] {
        let regime = Regime::free(0.0, vec![0.3, 0.3], Regime::equicorrelation(2, rho))
            .with_lower(0, 90.0)
            .with_lower(1, 90.0);
        let (s0, s1) = ([100.0, 100.0], [98.0, 101.0]);
        let ctx = IntervalContext::new(&s0, &s1, &regime, 0.25);
        let w = interval_weights(&ctx);
        let o = oracle_no_hit(&ctx, 1000, 40_000, 1);
        println!(
            "rho {rho:+.1}: lower {:.4}  indep {:.4}  upper {:.4}  fine grid {:.4} ({:.4})",
            w.p_lower, w.p_indep, w.p_upper, o.p, o.std_error
        );
    }
}
