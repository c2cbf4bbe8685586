//! Barrier option estimators built from simulated paths and bridge weights.
//!
//! For every path the engine evaluates the discounted payoff `V`, the
//! discrete survival indicator `I` and the products of per-interval no-hit
//! weights `W_X = prod_m P_X^(m)` for `X` in lower bound, independence,
//! upper bound and (when each interval carries at most one barrier event)
//! the exact marginal. All variants share the same paths, so
//! `Q_L <= Q_I <= Q_U <= Q_S` holds path by path for a plain knock-out.

use serde::{Deserialize, Serialize};

use crate::bridge::{weights_from_hits, xi_log};
use crate::error::{Error, Result};
use crate::model::{BarrierSide, KnockType, Validated};
use crate::normal;
use crate::simulate::{map_chunks, PathBuffer, PathGenerator};
use crate::stats::{EstimatorResult, RunningStats};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub paths: u64,
    pub seed: u64,
    /// Significance level of the confidence interval.
    pub alpha: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            paths: 100_000,
            seed: 20_020_327,
            alpha: 0.05,
        }
    }
}

impl RunConfig {
    pub fn new(paths: u64, seed: u64) -> Self {
        Self {
            paths,
            seed,
            ..Self::default()
        }
    }
}

/// Point estimate with the half-width of its `z = 1` interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointEstimate {
    pub value: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub low: f64,
    pub high: f64,
    pub alpha: f64,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.low <= x && x <= self.high
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PricingReport {
    pub knock: KnockType,
    pub rebate: f64,
    pub steps: usize,
    pub n_paths: u64,
    pub seed: u64,
    /// Discounted payoff without any barrier.
    pub vanilla: EstimatorResult,
    /// Discrete-monitoring estimator.
    pub q_s: EstimatorResult,
    pub q_upper: EstimatorResult,
    pub q_indep: EstimatorResult,
    pub q_lower: EstimatorResult,
    /// Unbiased estimator; only present when every interval has at most one
    /// barrier event.
    pub q_exact: Option<EstimatorResult>,
    /// Path-wise `Q_U - Q_L`.
    pub gap: EstimatorResult,
    /// Paths whose weighted payouts broke the bound ordering.
    pub ordering_violations: u64,
    pub q0: PointEstimate,
    pub q1: PointEstimate,
    pub q2: PointEstimate,
    pub ci: ConfidenceInterval,
}

/// Products of per-interval weights for one path (indicator not applied).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathWeights {
    pub alive_discrete: bool,
    /// Discounted payoff `e^{-rT} V(S(T))`.
    pub payoff: f64,
    pub lower: f64,
    pub indep: f64,
    pub upper: f64,
    pub exact: Option<f64>,
}

/// Per-path estimator values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathContribution {
    pub vanilla: f64,
    pub standard: f64,
    pub lower: f64,
    pub indep: f64,
    pub upper: f64,
    pub exact: Option<f64>,
    /// Whether the raw weighted payouts `c(I W_L), c(I W_I), c(I W_U), c(I)`
    /// are monotone along the chain before any clamping.
    pub ordered: bool,
}

/// How survival weights turn into a payout: `c(a) = on_survival * a +
/// on_knock * (1 - a)` with `a = I * W` the survival probability.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Payout {
    knock: KnockType,
    rebate: f64,
}

impl Payout {
    #[inline]
    fn value(&self, payoff: f64, discounted_rebate: f64, survival: f64) -> f64 {
        let (on_survival, on_knock) = match self.knock {
            KnockType::Out => (payoff, discounted_rebate),
            KnockType::In => (discounted_rebate, payoff),
        };
        on_survival * survival + on_knock * (1.0 - survival)
    }

    fn contribution(&self, w: &PathWeights, discounted_rebate: f64) -> PathContribution {
        let ind = if w.alive_discrete { 1.0 } else { 0.0 };
        let c = |weight: f64| self.value(w.payoff, discounted_rebate, ind * weight);
        let (a, i, b, s) = (c(w.lower), c(w.indep), c(w.upper), c(1.0));
        let ordered = (a <= i && i <= b && b <= s) || (a >= i && i >= b && b >= s);
        let (lower, upper) = if a <= b { (a, b) } else { (b, a) };
        PathContribution {
            vanilla: w.payoff,
            standard: s,
            lower,
            indep: i.clamp(lower, upper),
            upper,
            exact: w.exact.map(c),
            ordered,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct EventSpec {
    asset: usize,
    side: BarrierSide,
    log_level: f64,
    variance: f64,
}

/// Path simulation plus per-interval barrier events of a validated problem.
pub struct Engine<'a> {
    gen: PathGenerator<'a>,
    events: Vec<Vec<EventSpec>>,
    discount: f64,
    exact: bool,
}

impl<'a> Engine<'a> {
    pub fn new(problem: &'a Validated, seed: u64) -> Self {
        let model = problem.model();
        let events = (0..model.steps())
            .map(|m| {
                let r = &model.regimes[m];
                let dt = model.grid.dt(m);
                let mut ev = Vec::new();
                for asset in 0..model.dim() {
                    for side in [BarrierSide::Lower, BarrierSide::Upper] {
                        if let Some(level) = r.barrier(asset, side) {
                            ev.push(EventSpec {
                                asset,
                                side,
                                log_level: level.ln(),
                                variance: r.sigma[asset] * r.sigma[asset] * dt,
                            });
                        }
                    }
                }
                ev
            })
            .collect();
        Self {
            gen: PathGenerator::new(problem, seed),
            events,
            discount: model.discount(),
            exact: problem.single_event_per_interval(),
        }
    }

    pub fn buffer(&self) -> PathBuffer {
        self.gen.buffer()
    }

    /// Simulates path `index` and returns its weights.
    pub fn weights(&self, index: u64, buf: &mut PathBuffer) -> PathWeights {
        self.gen.fill(index, buf);
        let problem = self.gen.problem();
        let steps = problem.model().steps();
        let payoff = self.discount * problem.option().payoff_at(buf.prices(steps));
        let mut w = PathWeights {
            alive_discrete: buf.alive_discrete(),
            payoff,
            lower: 1.0,
            indep: 1.0,
            upper: 1.0,
            exact: self.exact.then_some(1.0),
        };
        if !w.alive_discrete {
            return w;
        }
        for (m, events) in self.events.iter().enumerate() {
            if events.is_empty() {
                continue;
            }
            let (x0, x1) = (buf.log_prices(m), buf.log_prices(m + 1));
            let p = weights_from_hits(
                events
                    .iter()
                    .map(|e| xi_log(x0[e.asset], x1[e.asset], e.log_level, e.side, e.variance)),
            );
            w.lower *= p.p_lower;
            w.indep *= p.p_indep;
            w.upper *= p.p_upper;
            if let (Some(acc), Some(pe)) = (w.exact.as_mut(), p.p_exact) {
                *acc *= pe;
            }
            if w.upper == 0.0 {
                break;
            }
        }
        w
    }
}

/// Per-path values of path `index` for the option's own knock type.
pub fn path_contribution(problem: &Validated, seed: u64, index: u64) -> PathContribution {
    let engine = Engine::new(problem, seed);
    let mut buf = engine.buffer();
    let w = engine.weights(index, &mut buf);
    let option = problem.option();
    let payout = Payout {
        knock: option.knock,
        rebate: option.rebate,
    };
    payout.contribution(&w, option.rebate * problem.model().discount())
}

#[derive(Default, Clone, Copy)]
struct Accumulator {
    vanilla: RunningStats,
    standard: RunningStats,
    lower: RunningStats,
    indep: RunningStats,
    upper: RunningStats,
    exact: RunningStats,
    gap: RunningStats,
    unordered: u64,
}

impl Accumulator {
    fn push(&mut self, c: &PathContribution) {
        self.vanilla.push(c.vanilla);
        self.standard.push(c.standard);
        self.lower.push(c.lower);
        self.indep.push(c.indep);
        self.upper.push(c.upper);
        if let Some(e) = c.exact {
            self.exact.push(e);
        }
        self.gap.push(c.upper - c.lower);
        self.unordered += u64::from(!c.ordered);
    }

    fn merge(&mut self, o: &Accumulator) {
        self.vanilla.merge(&o.vanilla);
        self.standard.merge(&o.standard);
        self.lower.merge(&o.lower);
        self.indep.merge(&o.indep);
        self.upper.merge(&o.upper);
        self.exact.merge(&o.exact);
        self.gap.merge(&o.gap);
        self.unordered += o.unordered;
    }
}

fn run(problem: &Validated, cfg: &RunConfig, payout: Payout) -> Result<PricingReport> {
    if cfg.paths < 2 {
        return Err(Error::Config(format!(
            "at least 2 paths are needed for a standard error, got {}",
            cfg.paths
        )));
    }
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(Error::Config(format!("alpha {} must lie in (0, 1)", cfg.alpha)));
    }
    let engine = Engine::new(problem, cfg.seed);
    let rebate = payout.rebate * problem.model().discount();
    let chunks = map_chunks(cfg.paths, |range| {
        let mut buf = engine.buffer();
        let mut acc = Accumulator::default();
        for index in range {
            let w = engine.weights(index, &mut buf);
            acc.push(&payout.contribution(&w, rebate));
        }
        acc
    });
    let mut acc = Accumulator::default();
    for c in &chunks {
        acc.merge(c);
    }

    let q_lower = acc.lower.result();
    let q_indep = acc.indep.result();
    let q_upper = acc.upper.result();
    let (q0, q1, q2) = point_estimators(&q_lower, &q_indep, &q_upper);
    Ok(PricingReport {
        knock: payout.knock,
        rebate: payout.rebate,
        steps: problem.model().steps(),
        n_paths: cfg.paths,
        seed: cfg.seed,
        vanilla: acc.vanilla.result(),
        q_s: acc.standard.result(),
        q_upper,
        q_indep,
        q_lower,
        q_exact: engine.exact.then(|| acc.exact.result()),
        gap: acc.gap.result(),
        ordering_violations: acc.unordered,
        q0,
        q1,
        q2,
        ci: confidence_interval(&q_lower, &q_upper, cfg.alpha),
    })
}

/// Prices the option as specified (knock type and rebate taken from it).
pub fn price(problem: &Validated, cfg: &RunConfig) -> Result<PricingReport> {
    let o = problem.option();
    run(
        problem,
        cfg,
        Payout {
            knock: o.knock,
            rebate: o.rebate,
        },
    )
}

/// Knock-in version of the option: pays `V (1 - I W)`. The knock-out upper
/// weight gives the knock-in lower estimator and vice versa.
pub fn knock_in_price(problem: &Validated, cfg: &RunConfig) -> Result<PricingReport> {
    run(
        problem,
        cfg,
        Payout {
            knock: KnockType::In,
            rebate: problem.option().rebate,
        },
    )
}

/// Knock-out with the option's rebate paid at maturity on knock-out:
/// `V I W + R (1 - I W)`. Bound estimators take the path-wise min and max of
/// the two Frechet-weighted payouts.
pub fn rebate_price(problem: &Validated, cfg: &RunConfig) -> Result<PricingReport> {
    run(
        problem,
        cfg,
        Payout {
            knock: KnockType::Out,
            rebate: problem.option().rebate,
        },
    )
}

/// `Q_0 = (Q_L + Q_U)/2`, `Q_1 = (Q_L + Q_I)/2`, `Q_2 = (Q_I + Q_U)/2`, each
/// with the half-width of `[Q_a - s_a, Q_b + s_b]`.
pub fn point_estimators(
    lower: &EstimatorResult,
    indep: &EstimatorResult,
    upper: &EstimatorResult,
) -> (PointEstimate, PointEstimate, PointEstimate) {
    let mid = |a: &EstimatorResult, b: &EstimatorResult| PointEstimate {
        value: 0.5 * (a.mean + b.mean),
        std_error: 0.5 * ((b.mean + b.std_error) - (a.mean - a.std_error)),
    };
    (mid(lower, upper), mid(lower, indep), mid(indep, upper))
}

/// `[Q_L - z s(Q_L)/sqrt(N), Q_U + z s(Q_U)/sqrt(N)]` with `z = z_{1 - alpha/2}`.
pub fn confidence_interval(lower: &EstimatorResult, upper: &EstimatorResult, alpha: f64) -> ConfidenceInterval {
    let z = normal::two_sided_quantile(alpha);
    ConfidenceInterval {
        low: lower.mean - z * lower.std_error,
        high: upper.mean + z * upper.std_error,
        alpha,
    }
}

/// Discretely monitored price at `m_target` dates from the continuous price
/// and one low-frequency estimate, using `Q_M = Q_c + lambda / sqrt(M)`.
pub fn discrete_barrier_interpolate(q_continuous: f64, q_lowfreq: f64, m_low: usize, m_target: usize) -> f64 {
    let lambda = (q_lowfreq - q_continuous) * (m_low as f64).sqrt();
    q_continuous + lambda / (m_target as f64).sqrt()
}
