//! Sweep over the number of dates and fit the decay of the bound gap:
//! exponential for a double barrier, power law for two independent assets.
//!
//! cargo run --release --example convergence_fit

use barrier_bridge::harness::config::ConfigFile;
use barrier_bridge::harness::fit::{fit_convergence, gap_points, FitKind};
use barrier_bridge::harness::sweep::{run_sweep, SweepSpec};
use barrier_bridge::RunConfig;

fn main() -> barrier_bridge::Result<()> {
    for (name, m_values, kind) in [
        ("table2", vec![1, 2, 4, 8, 16], FitKind::Exponential),
        ("table3_rho0", vec![8, 16, 32, 64, 128], FitKind::Power),
    ] {
        let cfg = ConfigFile::builtin(name)?;
        let spec = SweepSpec {
            label: name.into(),
            m_values,
            run: RunConfig::new(100_000, 1),
        };
        let rows = run_sweep(&cfg, &spec, |row| {
            println!("{name} M={:<4} gap {:.3e} ({:.1e})", row.m, row.report.gap.mean, row.report.gap.std_error);
            Ok(())
        })?;
        let fit = fit_convergence(&gap_points(&rows), kind)?;
        println!(
            "{name}: {kind:?} slope {:.3}, R^2 {:.4} over {} points\n",
            fit.slope,
            fit.r_squared,
            fit.points.len()
        );
    }
    Ok(())
}
