//! Closed-form Black-Scholes references used to validate the simulator.
//!
//! cargo run --example analytic_references

use barrier_bridge::analytic::{
    digital_call, down_and_out_call, down_and_out_digital, reference_price, vanilla_call, BsParams,
    TwoAssetConfig,
};

fn main() -> barrier_bridge::Result<()> {
    let p = BsParams::new(100.0, 100.0, 0.3, 0.1, 0.5);
    println!("vanilla call          {:.4}", vanilla_call(&p));
    println!("digital call          {:.4}", digital_call(&p));
    let ko = p.with_barrier(90.0);
    println!("down-and-out call     {:.4}", down_and_out_call(&ko)?);
    println!("down-and-out digital  {:.4}", down_and_out_digital(&ko)?);
    let cfg = TwoAssetConfig::default();
    for rho in [-1.0, 0.0, 1.0] {
        println!("two assets, rho {rho:+}   {:.4}", reference_price(rho, &cfg)?);
    }
    Ok(())
}
