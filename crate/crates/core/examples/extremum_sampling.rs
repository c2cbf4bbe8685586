//! Sampling the bridge maximum and minimum between two observed prices by
//! inverting the hit probability.
//!
//! cargo run --release --example extremum_sampling

use barrier_bridge::bridge::{sample_extremum, xi, Extremum};
use barrier_bridge::model::BarrierSide;
use barrier_bridge::simulate::PathRng;

fn main() {
    let (s0, s1, sigma, dt) = (100.0, 104.0, 0.3, 0.25);
    let mut rng = PathRng::new(11, 0);
    let n = 100_000;
    let (mut below, mut above) = (0, 0);
    for _ in 0..n {
        let u = rng.uniform();
        if sample_extremum(s0, s1, sigma, dt, u, Extremum::Min) <= 95.0 {
            below += 1;
        }
        if sample_extremum(s0, s1, sigma, dt, 1.0 - u, Extremum::Max) >= 110.0 {
            above += 1;
        }
    }
    println!(
        "P(min <= 95):  sampled {:.4}, closed form {:.4}",
        below as f64 / n as f64,
        xi(s0, s1, 95.0, BarrierSide::Lower, sigma, dt)
    );
    println!(
        "P(max >= 110): sampled {:.4}, closed form {:.4}",
        above as f64 / n as f64,
        xi(s0, s1, 110.0, BarrierSide::Upper, sigma, dt)
    );
}
