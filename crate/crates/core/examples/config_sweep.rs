//! Load a JSON configuration and stream a sweep to CSV.
//!
//! cargo run --release --example config_sweep -- crates/core/configs/table1a.json

use barrier_bridge::harness::config::ConfigFile;
use barrier_bridge::harness::sweep::{run_sweep, CsvSink, SweepSpec};

fn main() -> barrier_bridge::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::builtin("table1a")?,
    };
    let mut spec = SweepSpec::from_config(&cfg);
    spec.m_values = vec![1, 4, 16];
    spec.run.paths = 50_000;
    let mut sink = CsvSink::new(std::io::stdout().lock());
    run_sweep(&cfg, &spec, |row| sink.write(&spec.label, row))?;
    Ok(())
}
