//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs at full published sizes and takes several minutes on one core.
//! A criterion whose only failing checks are listed in `UNATTAINABLE` is
//! still printed as FAIL but does not fail the process.

use std::time::Instant;

use barrier_bridge::bridge::oracle::oracle_no_hit;
use barrier_bridge::bridge::{frechet_bounds, independent_no_hit, interval_weights, sample_extremum, weights_from_hits, xi, Extremum, IntervalContext};
use barrier_bridge::estimators::path_contribution;
use barrier_bridge::harness::config::ConfigFile;
use barrier_bridge::harness::fit::{fit_convergence, gap_points, FitKind};
use barrier_bridge::harness::sweep::{run_sweep, SweepRow, SweepSpec};
use barrier_bridge::harness::tables::{golden_checks, published, Check, Z_TOLERANCE};
use barrier_bridge::model::{BarrierSide, OptionSpec, Regime};
use barrier_bridge::{price, RunConfig};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SEED: u64 = 20_020_327;

/// Checks that cannot pass by construction, with the reason printed next to
/// them.
const UNATTAINABLE: &[(&str, &str)] = &[(
    "table3_rho-1 M=8 q_upper vs exact",
    "Q_U is a biased upper bound at M=8; the published value 0.018(0.001) is itself 5 se above 0.0131",
)];

struct Outcome {
    id: u8,
    title: &'static str,
    checks: Vec<Check>,
    seconds: f64,
}

impl Outcome {
    fn failing(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    fn pass(&self) -> bool {
        self.failing().is_empty()
    }

    fn expected_failure(&self) -> bool {
        let f = self.failing();
        !f.is_empty() && f.iter().all(|c| UNATTAINABLE.iter().any(|(n, _)| *n == c.name))
    }
}

fn sweep(config: &str, m_values: &[usize], paths: u64) -> Vec<SweepRow> {
    let cfg = ConfigFile::builtin(config).unwrap();
    let spec = SweepSpec {
        label: config.into(),
        m_values: m_values.to_vec(),
        run: RunConfig::new(paths, SEED),
    };
    run_sweep(&cfg, &spec, |_| Ok(())).unwrap()
}

fn row(rows: &[SweepRow], m: usize) -> &SweepRow {
    rows.iter().find(|r| r.m == m).unwrap()
}

fn vs_published(config: &str, r: &SweepRow, name: &str, computed: (f64, f64)) -> Check {
    let (value, se) = published(config).unwrap().value(name, r.m).unwrap();
    Check::within(
        format!("{config} M={} {name} vs published", r.m),
        computed.0,
        value,
        computed.1.hypot(se),
        Z_TOLERANCE,
    )
}

fn vs_exact(config: &str, r: &SweepRow, name: &str, computed: (f64, f64), exact: f64) -> Check {
    Check::within(format!("{config} M={} {name} vs exact", r.m), computed.0, exact, computed.1, Z_TOLERANCE)
}

fn mse(e: &barrier_bridge::stats::EstimatorResult) -> (f64, f64) {
    (e.mean, e.std_error)
}

fn criterion1() -> Vec<Check> {
    let rows = sweep("table1a", &[1, 16, 1024], 400_000);
    let mut checks: Vec<Check> = rows
        .iter()
        .map(|r| vs_exact("table1a", r, "q_exact", mse(&r.report.q_exact.unwrap()), 8.794))
        .collect();
    let r1 = row(&rows, 1);
    checks.push(vs_published("table1a", r1, "q_s", mse(&r1.report.q_s)));
    checks
}

fn criterion2() -> Vec<Check> {
    let rows = sweep("table1b", &[1], 800_000);
    vec![vs_exact("table1b", &rows[0], "q_exact", mse(&rows[0].report.q_exact.unwrap()), 8.256)]
}

fn criterion3(table2: &[SweepRow]) -> Vec<Check> {
    let mut checks = Vec::new();
    let r16 = row(table2, 16);
    for (name, e) in [("q_upper", &r16.report.q_upper), ("q_indep", &r16.report.q_indep), ("q_lower", &r16.report.q_lower)] {
        checks.push(vs_exact("table2", r16, name, mse(e), 1.793));
    }
    let r1 = row(table2, 1);
    let r = &r1.report;
    for (name, v) in [
        ("q_upper", mse(&r.q_upper)),
        ("q_indep", mse(&r.q_indep)),
        ("q_lower", mse(&r.q_lower)),
        ("q_s", mse(&r.q_s)),
        ("q1", (r.q1.value, r.q1.std_error)),
    ] {
        checks.push(vs_published("table2", r1, name, v));
    }
    checks
}

fn criterion4(rho0: &[SweepRow]) -> Vec<Check> {
    let mut checks = golden_checks("table3_rho0", rho0);
    checks.extend(golden_checks("table3_rho-0.5", &sweep("table3_rho-0.5", &[64], 100_000)));
    checks.extend(golden_checks("table3_rho0.5", &sweep("table3_rho0.5", &[64], 100_000)));
    checks.extend(golden_checks("table3_rho1", &sweep("table3_rho1", &[1, 64], 100_000)));
    checks.extend(golden_checks("table3_rho-1", &sweep("table3_rho-1", &[1, 8, 16, 32, 64, 1024], 100_000)));
    checks
}

fn criterion5() -> Vec<Check> {
    let mut checks = Vec::new();
    for config in ["table4_d3", "table4_d10"] {
        let rows = sweep(config, &[1, 2, 4, 8, 16, 32, 64, 1024], 100_000);
        checks.extend(golden_checks(config, &rows));
    }
    checks
}

fn slope_check(name: &str, rows: &[SweepRow], kind: FitKind, lo: f64, hi: f64) -> Vec<Check> {
    match fit_convergence(&gap_points(rows), kind) {
        Ok(fit) => vec![
            Check::below(format!("{name} slope above {lo}"), -fit.slope, -lo),
            Check::below(format!("{name} slope below {hi}"), fit.slope, hi),
        ],
        Err(e) => vec![Check::below(format!("{name}: {e}"), 1.0, 0.0)],
    }
}

fn criterion6(table2: &[SweepRow], rho0: &[SweepRow]) -> Vec<Check> {
    let mut checks = Vec::new();
    match fit_convergence(&gap_points(table2), FitKind::Exponential) {
        Ok(fit) => {
            checks.push(Check::below("table2 exponential slope negative", fit.slope, 0.0));
            checks.push(Check::below("table2 exponential R^2 at least 0.9", -fit.r_squared, -0.9));
        }
        Err(e) => checks.push(Check::below(format!("table2 fit: {e}"), 1.0, 0.0)),
    }
    let large: Vec<SweepRow> = rho0.iter().filter(|r| r.m >= 8).cloned().collect();
    checks.extend(slope_check("table3_rho0 power", &large, FitKind::Power, -2.5, -1.5));
    let mut rho1 = sweep("table3_rho1", &[16, 32, 64], 200_000);
    rho1.extend(sweep("table3_rho1", &[256, 1024], 1_000_000));
    checks.extend(slope_check("table3_rho1 power", &rho1, FitKind::Power, -0.7, -0.3));
    checks
}

struct RandomContext {
    regime: Regime,
    s0: Vec<f64>,
    s1: Vec<f64>,
    dt: f64,
}

fn random_context(rng: &mut StdRng, i: usize) -> RandomContext {
    let d = 1 + i % 3;
    let single = i % 4 == 0;
    let dt: f64 = rng.random_range(0.05..0.5);
    let rho: f64 = rng.random_range(-0.45..0.9);
    let sigma: Vec<f64> = (0..d).map(|_| rng.random_range(0.15..0.45)).collect();
    let corr = Regime::equicorrelation(d, if d == 1 { 0.0 } else { rho });
    let s0 = vec![100.0f64; d];
    let s1: Vec<f64> = sigma
        .iter()
        .map(|s| 100.0 * (0.7 * s * dt.sqrt() * rng.random_range(-1.0..1.0)).exp())
        .collect();
    let mut regime = Regime::free(0.0, sigma.clone(), corr);
    let mut events = 0;
    for k in 0..d {
        let scale = sigma[k] * dt.sqrt();
        let lo = s0[k].min(s1[k]) * (-rng.random_range(0.3..1.5) * scale).exp();
        let hi = s0[k].max(s1[k]) * (rng.random_range(0.3..1.5) * scale).exp();
        let pattern = if single {
            if k == 0 { 1 + rng.random_range(0..2) } else { 0 }
        } else {
            rng.random_range(0..4)
        };
        if pattern == 1 || pattern == 3 {
            regime = regime.with_lower(k, lo);
            events += 1;
        }
        if pattern == 2 || pattern == 3 {
            regime = regime.with_upper(k, hi);
            events += 1;
        }
    }
    if !single && events < 2 {
        let scale = sigma[0] * dt.sqrt();
        regime = regime
            .with_lower(0, s0[0].min(s1[0]) * (-0.8 * scale).exp())
            .with_upper(0, s0[0].max(s1[0]) * (0.8 * scale).exp());
    }
    RandomContext { regime, s0, s1, dt }
}

fn criterion7() -> Vec<Check> {
    const SUBSTEPS: usize = 2000;
    const TRIALS: u64 = 100_000;
    let allowance = 1.0 / SUBSTEPS as f64;
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut checks = Vec::new();
    for i in 0..20 {
        let c = random_context(&mut rng, i);
        let ctx = IntervalContext::new(&c.s0, &c.s1, &c.regime, c.dt);
        let w = interval_weights(&ctx);
        let o = oracle_no_hit(&ctx, SUBSTEPS, TRIALS, SEED + i as u64);
        let band = 4.0 * o.std_error;
        let name = format!("context {i} (d={}, events={})", c.regime.dim(), c.regime.event_count());
        checks.push(Check::below(format!("{name} oracle above p_lower - 4se"), w.p_lower - band, o.p));
        checks.push(Check::below(format!("{name} oracle below p_upper + 4se"), o.p, w.p_upper + band));
        if let Some(p) = w.p_exact.filter(|_| c.regime.event_count() == 1) {
            checks.push(Check::within(format!("{name} oracle vs 1 - xi"), o.p, p, band + allowance, 1.0));
        }
    }
    checks
}

fn criterion8() -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut unordered = 0u32;
    for _ in 0..10_000 {
        let n = rng.random_range(1..8);
        let hits: Vec<f64> = (0..n)
            .map(|_| match rng.random_range(0..10) {
                0 => 0.0,
                1 => 1.0,
                _ => rng.random::<f64>(),
            })
            .collect();
        let (lo, hi) = frechet_bounds(&hits);
        let ind = independent_no_hit(&hits);
        let w = weights_from_hits(hits.iter().copied());
        if !(lo <= ind && ind <= hi && w.p_lower <= w.p_indep && w.p_indep <= w.p_upper) {
            unordered += 1;
        }
    }

    let mut worst_inverse = 0.0f64;
    for _ in 0..10_000 {
        let (s0, s1): (f64, f64) = (rng.random_range(50.0..150.0), rng.random_range(50.0..150.0));
        let sigma = rng.random_range(0.05..0.8);
        let dt = rng.random_range(0.01..1.0);
        let u = rng.random_range(1e-6..1.0 - 1e-6);
        let lo = sample_extremum(s0, s1, sigma, dt, u, Extremum::Min);
        let hi = sample_extremum(s0, s1, sigma, dt, u, Extremum::Max);
        for (x, side) in [(lo, BarrierSide::Lower), (hi, BarrierSide::Upper)] {
            if x != s0.min(s1) && x != s0.max(s1) {
                worst_inverse = worst_inverse.max((xi(s0, s1, x, side, sigma, dt) - u).abs());
            }
        }
    }

    let ko = ConfigFile::builtin("table3_rho0.5").unwrap().validated_with_steps(8).unwrap();
    let ki = ko.with_option(OptionSpec::call(0, 100.0).knock_in()).unwrap();
    let mut parity = 0.0f64;
    for i in 0..10_000 {
        let (a, b) = (path_contribution(&ko, SEED, i), path_contribution(&ki, SEED, i));
        for err in [
            a.standard + b.standard - a.vanilla,
            a.lower + b.upper - a.vanilla,
            a.upper + b.lower - a.vanilla,
            a.indep + b.indep - a.vanilla,
        ] {
            parity = parity.max(err.abs());
        }
    }

    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| price(&ko, &RunConfig::new(50_000, SEED)).unwrap())
    };
    let one = run(1);
    let differing = [2, 4, 7].iter().filter(|&&t| run(t) != one).count();

    vec![
        Check::exact("Frechet ordering violations in 10^4 vectors", unordered as f64, 0.0),
        Check::below("extremum inverse error below 1e-10", worst_inverse, 1e-10),
        Check::below("KO + KI - vanilla below 1e-12", parity, 1e-12),
        Check::exact("reports differing from the 1-worker run", differing as f64, 0.0),
    ]
}

fn timed(id: u8, title: &'static str, f: impl FnOnce() -> Vec<Check>) -> Outcome {
    let t = Instant::now();
    let checks = f();
    Outcome {
        id,
        title,
        checks,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let t = Instant::now();
    let table2 = sweep("table2", &[1, 2, 4, 8, 16, 32], 400_000);
    let rho0 = sweep("table3_rho0", &[1, 8, 16, 32, 64, 1024], 100_000);
    let shared = t.elapsed().as_secs_f64();

    let outcomes = vec![
        timed(1, "one-asset knock-out, unbiased at M = 1, 16, 1024", criterion1),
        timed(2, "two assets, barrier on the second, M = 1", criterion2),
        timed(3, "double knock-out at M = 16 and M = 1", || criterion3(&table2)),
        timed(4, "two assets with two barriers across correlations", || criterion4(&rho0)),
        timed(5, "three and ten assets: ordering, gap, published rows", criterion5),
        timed(6, "convergence rates of the bound gap", || criterion6(&table2, &rho0)),
        timed(7, "bridge weights against the fine-grid oracle", criterion7),
        timed(8, "algebraic invariants", criterion8),
    ];

    let mut unexpected = 0;
    for o in &outcomes {
        let status = if o.pass() { "PASS" } else { "FAIL" };
        println!(
            "[{status}] criterion {}: {} ({} checks, {:.0}s)",
            o.id,
            o.title,
            o.checks.len(),
            o.seconds
        );
        for c in o.failing() {
            let known = UNATTAINABLE.iter().find(|(n, _)| *n == c.name);
            println!(
                "       {}: {:.6} vs {:.6} (z {:.2}){}",
                c.name,
                c.computed,
                c.expected,
                c.z,
                known.map(|(_, why)| format!(" [unattainable: {why}]")).unwrap_or_default()
            );
        }
        if !o.pass() && !o.expected_failure() {
            unexpected += 1;
        }
    }
    println!("shared sweeps {shared:.0}s, total {:.0}s", t.elapsed().as_secs_f64());
    if unexpected > 0 {
        println!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
