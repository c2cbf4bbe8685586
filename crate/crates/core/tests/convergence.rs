use barrier_bridge::harness::config::ConfigFile;
use barrier_bridge::harness::fit::{fit_convergence, gap_points, FitKind};
use barrier_bridge::harness::sweep::{run_sweep, SweepSpec};
use barrier_bridge::RunConfig;

fn gaps(config: &str, m_values: Vec<usize>, paths: u64) -> Vec<barrier_bridge::harness::fit::GapPoint> {
    let cfg = ConfigFile::builtin(config).unwrap();
    let spec = SweepSpec {
        label: config.into(),
        m_values,
        run: RunConfig::new(paths, 31),
    };
    gap_points(&run_sweep(&cfg, &spec, |_| Ok(())).unwrap())
}

#[test]
fn unequal_spots_turn_the_perfect_correlation_rate_exponential() {
    let points = gaps("fig5", vec![1, 2, 4, 8, 16, 32, 64, 128], 50_000);
    let exp = fit_convergence(&points, FitKind::Exponential).unwrap();
    let pow = fit_convergence(&points, FitKind::Power).unwrap();
    assert_eq!(exp.points, pow.points);
    assert!(exp.slope < 0.0);
    assert!(exp.r_squared > pow.r_squared, "exp {} vs power {}", exp.r_squared, pow.r_squared);
}

#[test]
fn equal_spots_at_perfect_correlation_decay_like_a_square_root() {
    let points = gaps("table3_rho1", vec![8, 16, 32, 64, 128], 50_000);
    let pow = fit_convergence(&points, FitKind::Power).unwrap();
    assert!((-0.7..=-0.3).contains(&pow.slope), "{}", pow.slope);
    let exp = fit_convergence(&points, FitKind::Exponential).unwrap();
    assert!(pow.r_squared > exp.r_squared);
}
