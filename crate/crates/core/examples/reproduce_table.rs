//! Reproduce a published table at reduced size and print the comparison.
//!
//! cargo run --release --example reproduce_table -- 2

use barrier_bridge::harness::tables::{reproduce_table, TableOptions};

fn main() -> barrier_bridge::Result<()> {
    let id = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let opts = TableOptions {
        paths: Some(40_000),
        seed: None,
        m_values: Some(vec![1, 8, 64]),
    };
    let report = reproduce_table(id, &opts)?;
    print!("{}", report.render());
    Ok(())
}
