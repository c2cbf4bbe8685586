use barrier_bridge::estimators::{knock_in_price, path_contribution, rebate_price};
use barrier_bridge::harness::config::ConfigFile;
use barrier_bridge::model::{validate, MarketModel, OptionSpec, Regime};
use barrier_bridge::simulate::simulate_path;
use barrier_bridge::{price, RunConfig};

fn two_asset(rho: f64, steps: usize) -> barrier_bridge::Validated {
    let regime = Regime::free(0.1, vec![0.3, 0.3], Regime::equicorrelation(2, rho))
        .with_lower(0, 90.0)
        .with_lower(1, 90.0);
    let model = MarketModel::constant(vec![100.0, 100.0], 0.1, 1.0, steps, regime).unwrap();
    validate(&model, &OptionSpec::call(0, 100.0)).unwrap()
}

#[test]
fn discounted_prices_are_martingales() {
    let regime = Regime::free(0.1, vec![0.3, 0.2], Regime::equicorrelation(2, 0.5));
    let model = MarketModel::constant(vec![100.0, 50.0], 0.1, 1.0, 4, regime).unwrap();
    let p = validate(&model, &OptionSpec::call(0, 100.0)).unwrap();
    let n = 200_000;
    let mut sums = [0.0f64; 2];
    let mut sq = [0.0f64; 2];
    for i in 0..n {
        let path = simulate_path(&p, 3, i);
        for k in 0..2 {
            let x = path.values[4][k] * (-0.1f64).exp();
            sums[k] += x;
            sq[k] += x * x;
        }
    }
    for (k, spot) in [100.0, 50.0].into_iter().enumerate() {
        let mean = sums[k] / n as f64;
        let se = ((sq[k] / n as f64 - mean * mean) / n as f64).sqrt();
        assert!((mean - spot).abs() < 4.0 * se, "asset {k}: {mean} vs {spot} (se {se})");
    }
}

#[test]
fn log_return_correlation_matches_input() {
    let regime = Regime::free(0.05, vec![0.3, 0.3, 0.3], Regime::equicorrelation(3, -0.3));
    let model = MarketModel::constant(vec![100.0; 3], 0.05, 1.0, 1, regime).unwrap();
    let p = validate(&model, &OptionSpec::call(0, 100.0)).unwrap();
    let n = 100_000;
    let rets: Vec<[f64; 3]> = (0..n)
        .map(|i| {
            let v = simulate_path(&p, 8, i).values;
            [0, 1, 2].map(|k| (v[1][k] / v[0][k]).ln())
        })
        .collect();
    let mean = |k: usize| rets.iter().map(|r| r[k]).sum::<f64>() / n as f64;
    let m = [mean(0), mean(1), mean(2)];
    let cov = |a: usize, b: usize| rets.iter().map(|r| (r[a] - m[a]) * (r[b] - m[b])).sum::<f64>() / n as f64;
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let c = cov(a, b) / (cov(a, a) * cov(b, b)).sqrt();
        // sampling error of a correlation estimate is about (1 - rho^2)/sqrt(n)
        assert!((c + 0.3).abs() < 4.0 * 0.91 / (n as f64).sqrt(), "{a}{b}: {c}");
    }
}

#[test]
fn knock_out_plus_knock_in_is_vanilla_path_by_path() {
    for (rho, steps) in [(0.5, 4), (-1.0, 3), (1.0, 2)] {
        let ko = two_asset(rho, steps);
        let ki = ko.with_option(OptionSpec::call(0, 100.0).knock_in()).unwrap();
        for i in 0..2000 {
            let a = path_contribution(&ko, 17, i);
            let b = path_contribution(&ki, 17, i);
            let v = a.vanilla;
            let tol = 1e-12 * v.abs().max(1.0);
            assert!((a.standard + b.standard - v).abs() <= tol);
            assert!((a.lower + b.upper - v).abs() <= tol);
            assert!((a.upper + b.lower - v).abs() <= tol);
            assert!((a.indep + b.indep - v).abs() <= tol);
        }
    }
}

#[test]
fn knock_in_report_complements_knock_out() {
    let ko = two_asset(0.0, 8);
    let cfg = RunConfig::new(20_000, 4);
    let out = price(&ko, &cfg).unwrap();
    let inn = knock_in_price(&ko, &cfg).unwrap();
    assert_eq!(out.vanilla, inn.vanilla);
    let v = out.vanilla.mean;
    assert!((out.q_lower.mean + inn.q_upper.mean - v).abs() < 1e-9);
    assert!((out.q_upper.mean + inn.q_lower.mean - v).abs() < 1e-9);
    assert!(inn.q_lower.mean <= inn.q_indep.mean && inn.q_indep.mean <= inn.q_upper.mean);
}

#[test]
fn zero_rebate_is_bit_identical_to_plain_knock_out() {
    let p = two_asset(0.5, 8);
    let cfg = RunConfig::new(10_000, 12);
    let plain = price(&p, &cfg).unwrap();
    let rebated = rebate_price(&p.with_option(OptionSpec::call(0, 100.0).with_rebate(0.0)).unwrap(), &cfg).unwrap();
    assert_eq!(plain, rebated);
    for (a, b) in [(plain.q_lower, rebated.q_lower), (plain.q_upper, rebated.q_upper)] {
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    }
}

#[test]
fn rebate_raises_every_bound() {
    let p = two_asset(0.5, 8);
    let cfg = RunConfig::new(10_000, 12);
    let plain = price(&p, &cfg).unwrap();
    let r = rebate_price(&p.with_option(OptionSpec::call(0, 100.0).with_rebate(2.0)).unwrap(), &cfg).unwrap();
    assert!(r.q_lower.mean > plain.q_lower.mean);
    assert!(r.q_upper.mean > plain.q_upper.mean);
    assert!(r.q_lower.mean <= r.q_indep.mean && r.q_indep.mean <= r.q_upper.mean);
    assert_eq!(r.ordering_violations, 0);
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let p = two_asset(0.5, 16);
    let cfg = RunConfig::new(30_000, 99);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| price(&p, &cfg).unwrap())
    };
    let one = run(1);
    for threads in [2, 3, 8] {
        let other = run(threads);
        assert_eq!(one, other, "{threads} workers");
        assert_eq!(one.q_indep.mean.to_bits(), other.q_indep.mean.to_bits());
        assert_eq!(one.gap.std_error.to_bits(), other.gap.std_error.to_bits());
    }
}

#[test]
fn discrete_estimator_bias_shrinks_with_m() {
    let cfg = ConfigFile::builtin("table3_rho0.5").unwrap();
    let run = RunConfig::new(20_000, 5);
    let rows: Vec<_> = [1, 2, 4, 8, 16, 32]
        .iter()
        .map(|&m| price(&cfg.validated_with_steps(m).unwrap(), &run).unwrap())
        .collect();
    for w in rows.windows(2) {
        let combined = w[0].q_s.std_error.hypot(w[1].q_s.std_error);
        assert!(w[1].q_s.mean <= w[0].q_s.mean + 4.0 * combined);
    }
}

#[test]
fn regime_switch_keeps_exact_between_bounds() {
    let cfg = ConfigFile::from_json(
        r#"{"assets":1,"spot":[100],"rate":0.05,"grid":{"dates":[0,0.5,1]},
            "regimes":[{"sigma":[0.2],"corr":[[1]],"lower":[80]},{"sigma":[0.4],"corr":[[1]],"lower":[85]}],
            "option":{"kind":"call","strike":100}}"#,
    )
    .unwrap();
    let r = price(&cfg.validated().unwrap(), &RunConfig::new(20_000, 1)).unwrap();
    let e = r.q_exact.unwrap();
    assert!(r.q_lower.mean <= e.mean + 1e-12 && e.mean <= r.q_upper.mean + 1e-12);
    assert!(r.q_upper.mean < r.q_s.mean);
}
