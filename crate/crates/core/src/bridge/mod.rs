//! Conditional no-hit probabilities of Brownian bridges between sampling
//! dates.
//!
//! Given both endpoints of an interval, the probability that asset `k`
//! touches a constant barrier `X` somewhere inside the interval is
//!
//! ```text
//! xi_k(X) = exp(-2 ln(X / S_k^(m)) ln(X / S_k^(m+1)) / (sigma_k^2 dt))
//! ```
//!
//! With several barrier events in one interval only these marginals are
//! known. The joint no-hit probability is bracketed by the Frechet bounds
//! `max(1 - sum xi, 0) <= P <= min(1 - xi)`, and the independence product
//! `prod(1 - xi)` sits between them.

pub mod oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BarrierSide, Regime};

pub use oracle::{oracle_no_hit, OracleEstimate};

/// Uniform draws are clamped to `[EPS, 1 - EPS]` before inversion.
pub const EXTREMUM_EPS: f64 = 1e-16;

/// Hit probability from log prices and the bridge variance `sigma^2 dt`.
///
/// Returns 1 when an endpoint touches or crosses the barrier and 0 when the
/// variance is zero otherwise.
#[inline]
pub fn xi_log(x0: f64, x1: f64, log_barrier: f64, side: BarrierSide, variance: f64) -> f64 {
    let breached = match side {
        BarrierSide::Lower => x0.min(x1) <= log_barrier,
        BarrierSide::Upper => x0.max(x1) >= log_barrier,
    };
    if breached {
        return 1.0;
    }
    if variance <= 0.0 {
        return 0.0;
    }
    (-2.0 * (log_barrier - x0) * (log_barrier - x1) / variance).exp()
}

/// Probability that a GBM bridge from `s0` to `s1` touches `barrier` within
/// an interval of length `dt`.
pub fn xi(s0: f64, s1: f64, barrier: f64, side: BarrierSide, sigma: f64, dt: f64) -> f64 {
    let breached = match side {
        BarrierSide::Lower => s0.min(s1) <= barrier,
        BarrierSide::Upper => s0.max(s1) >= barrier,
    };
    if breached {
        return 1.0;
    }
    xi_log(s0.ln(), s1.ln(), barrier.ln(), side, sigma * sigma * dt)
}

/// Endpoints and parameters of one interval.
#[derive(Debug, Clone, Copy)]
pub struct IntervalContext<'a> {
    pub s0: &'a [f64],
    pub s1: &'a [f64],
    pub regime: &'a Regime,
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierEvent {
    pub asset: usize,
    pub side: BarrierSide,
    pub xi: f64,
}

impl<'a> IntervalContext<'a> {
    pub fn new(s0: &'a [f64], s1: &'a [f64], regime: &'a Regime, dt: f64) -> Self {
        Self { s0, s1, regime, dt }
    }

    /// Every active barrier event of the interval with its hit probability.
    pub fn events(&self) -> Vec<BarrierEvent> {
        let mut out = Vec::new();
        for asset in 0..self.regime.dim() {
            for side in [BarrierSide::Lower, BarrierSide::Upper] {
                if let Some(level) = self.regime.barrier(asset, side) {
                    out.push(BarrierEvent {
                        asset,
                        side,
                        xi: xi(
                            self.s0[asset],
                            self.s1[asset],
                            level,
                            side,
                            self.regime.sigma[asset],
                            self.dt,
                        ),
                    });
                }
            }
        }
        out
    }
}

/// No-hit probability of one asset: exact for a single barrier, the two
/// marginals for a double barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MarginalNoHit {
    Single(f64),
    Double { lower: f64, upper: f64 },
}

pub fn marginal_no_hit(ctx: &IntervalContext<'_>, asset: usize) -> Result<MarginalNoHit> {
    let r = ctx.regime;
    let p = |side: BarrierSide, level: f64| {
        1.0 - xi(ctx.s0[asset], ctx.s1[asset], level, side, r.sigma[asset], ctx.dt)
    };
    match (r.lower[asset], r.upper[asset]) {
        (None, None) => Err(Error::NoActiveBarrier { asset }),
        (Some(h), None) => Ok(MarginalNoHit::Single(p(BarrierSide::Lower, h))),
        (None, Some(hh)) => Ok(MarginalNoHit::Single(p(BarrierSide::Upper, hh))),
        (Some(h), Some(hh)) => Ok(MarginalNoHit::Double {
            lower: p(BarrierSide::Lower, h),
            upper: p(BarrierSide::Upper, hh),
        }),
    }
}

/// Per-interval no-hit weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BridgeWeights {
    pub p_lower: f64,
    pub p_indep: f64,
    pub p_upper: f64,
    /// Exact marginal, present when at most one event is active.
    pub p_exact: Option<f64>,
}

impl BridgeWeights {
    pub const CERTAIN: BridgeWeights = BridgeWeights {
        p_lower: 1.0,
        p_indep: 1.0,
        p_upper: 1.0,
        p_exact: Some(1.0),
    };
}

/// Assembles Frechet bounds, independence product and (for a single event)
/// the exact weight from hit probabilities in one pass.
#[inline]
pub fn weights_from_hits(hits: impl IntoIterator<Item = f64>) -> BridgeWeights {
    let mut sum = 0.0;
    let mut upper: f64 = 1.0;
    let mut indep = 1.0;
    let mut count = 0usize;
    for x in hits {
        let miss = 1.0 - x;
        sum += x;
        upper = upper.min(miss);
        indep *= miss;
        count += 1;
    }
    let lower = (1.0 - sum).max(0.0).min(upper);
    BridgeWeights {
        p_lower: lower,
        // Rounding can push the product past either bound by an ulp.
        p_indep: indep.clamp(lower, upper),
        p_upper: upper,
        p_exact: match count {
            0 => Some(1.0),
            1 => Some(upper),
            _ => None,
        },
    }
}

/// `(max(1 - sum xi, 0), min(1 - xi))`; `(1, 1)` for no events.
pub fn frechet_bounds(hits: &[f64]) -> (f64, f64) {
    let w = weights_from_hits(hits.iter().copied());
    (w.p_lower, w.p_upper)
}

/// `prod(1 - xi)`.
pub fn independent_no_hit(hits: &[f64]) -> f64 {
    weights_from_hits(hits.iter().copied()).p_indep
}

pub fn interval_weights(ctx: &IntervalContext<'_>) -> BridgeWeights {
    weights_from_hits(ctx.events().into_iter().map(|e| e.xi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extremum {
    Max,
    Min,
}

/// Solves `xi(X) = u` for the bridge extremum.
///
/// In log space `x = (a + b)/2 ± sqrt((a - b)^2/4 - sigma^2 dt ln(u)/2)` with
/// `a = ln s0`, `b = ln s1`; the `+` root is the maximum, the `-` root the
/// minimum. Feeding `u = 1 - U` (maximum) or `u = U` (minimum) with `U`
/// uniform samples the extremum distribution.
pub fn sample_extremum(s0: f64, s1: f64, sigma: f64, dt: f64, u: f64, which: Extremum) -> f64 {
    let u = u.clamp(EXTREMUM_EPS, 1.0 - EXTREMUM_EPS);
    let (a, b) = (s0.ln(), s1.ln());
    let half_gap = 0.5 * (a - b);
    let root = (half_gap * half_gap - 0.5 * sigma * sigma * dt * u.ln()).sqrt();
    let mid = 0.5 * (a + b);
    match which {
        Extremum::Max => (mid + root).exp().max(s0.max(s1)),
        Extremum::Min => (mid - root).exp().min(s0.min(s1)),
    }
}
