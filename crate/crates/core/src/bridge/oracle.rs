//! Brute-force reference for the joint no-hit probability of one interval.
//!
//! Simulates the multi-dimensional bridge pinned at both endpoints on a fine
//! grid and counts trials that stay strictly inside every barrier. Monitoring
//! on a grid of spacing `h` misses crossings between grid points, so interior
//! checks use barriers moved towards the path by `beta sigma sqrt(h)`
//! (`beta = -zeta(1/2)/sqrt(2 pi)`), the usual continuity correction for
//! discretely monitored Brownian motion. The remaining error is `o(sqrt(h))`.

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::IntervalContext;
use crate::model::BarrierSide;
use crate::simulate::map_chunks;

pub const CONTINUITY_BETA: f64 = 0.582_597_157_939_010_6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleEstimate {
    pub p: f64,
    pub std_error: f64,
    pub trials: u64,
}

struct Check {
    asset: usize,
    side: BarrierSide,
    log_level: f64,
    interior: f64,
}

pub fn oracle_no_hit(ctx: &IntervalContext<'_>, substeps: usize, trials: u64, seed: u64) -> OracleEstimate {
    let r = ctx.regime;
    let d = r.dim();
    let h = ctx.dt / substeps as f64;
    let a: Vec<f64> = ctx.s0.iter().map(|s| s.ln()).collect();
    let b: Vec<f64> = ctx.s1.iter().map(|s| s.ln()).collect();

    let mut checks = Vec::new();
    for asset in 0..d {
        for side in [BarrierSide::Lower, BarrierSide::Upper] {
            if let Some(level) = r.barrier(asset, side) {
                let shift = CONTINUITY_BETA * r.sigma[asset] * h.sqrt();
                let log_level = level.ln();
                let interior = match side {
                    BarrierSide::Lower => log_level + shift,
                    BarrierSide::Upper => log_level - shift,
                };
                checks.push(Check {
                    asset,
                    side,
                    log_level,
                    interior,
                });
            }
        }
    }
    let hit = |x: &[f64], level: fn(&Check) -> f64| {
        checks.iter().any(|c| match c.side {
            BarrierSide::Lower => x[c.asset] <= level(c),
            BarrierSide::Upper => x[c.asset] >= level(c),
        })
    };
    if hit(&a, |c| c.log_level) || hit(&b, |c| c.log_level) {
        return OracleEstimate {
            p: 0.0,
            std_error: 0.0,
            trials,
        };
    }

    let factor = r.factor().expect("oracle needs a factorizable correlation");
    let counts = map_chunks(trials, |range| {
        let mut rng = SmallRng::seed_from_u64(seed ^ range.start.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut u = vec![0.0; d];
        let mut z = vec![0.0; d];
        let mut bridge = vec![0.0; d];
        let mut x = vec![0.0; d];
        let mut survived = 0u64;
        for _ in range.clone() {
            bridge.iter_mut().for_each(|v| *v = 0.0);
            let mut alive = true;
            for k in 0..substeps.saturating_sub(1) {
                let remaining = ctx.dt - k as f64 * h;
                let keep = (remaining - h) / remaining;
                let scale = (h * keep).sqrt();
                for v in u.iter_mut() {
                    *v = rng.sample(StandardNormal);
                }
                factor.apply(&u, &mut z);
                let frac = (k + 1) as f64 / substeps as f64;
                for i in 0..d {
                    bridge[i] = bridge[i] * keep + scale * r.sigma[i] * z[i];
                    x[i] = a[i] + (b[i] - a[i]) * frac + bridge[i];
                }
                if hit(&x, |c| c.interior) {
                    alive = false;
                    break;
                }
            }
            survived += alive as u64;
        }
        survived
    });
    let survived: u64 = counts.iter().sum();
    let p = survived as f64 / trials as f64;
    OracleEstimate {
        p,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
        trials,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::{xi, BarrierSide};
    use crate::model::Regime;

    #[test]
    fn zero_volatility_bridge_never_hits() {
        let r = Regime::free(0.1, vec![0.0], vec![vec![1.0]]).with_lower(0, 90.0);
        let ctx = IntervalContext::new(&[100.0], &[95.0], &r, 0.5);
        let est = oracle_no_hit(&ctx, 100, 10_000, 1);
        assert_eq!(est.p, 1.0);
    }

    #[test]
    fn endpoint_breach_is_certain_hit() {
        let r = Regime::free(0.1, vec![0.3], vec![vec![1.0]]).with_lower(0, 90.0);
        let ctx = IntervalContext::new(&[100.0], &[90.0], &r, 0.5);
        assert_eq!(oracle_no_hit(&ctx, 100, 10_000, 1).p, 0.0);
    }

    #[test]
    fn single_barrier_matches_closed_form() {
        let r = Regime::free(0.1, vec![0.3], vec![vec![1.0]]).with_lower(0, 90.0);
        let ctx = IntervalContext::new(&[100.0], &[100.0], &r, 0.5);
        let est = oracle_no_hit(&ctx, 500, 40_000, 11);
        let exact = 1.0 - xi(100.0, 100.0, 90.0, BarrierSide::Lower, 0.3, 0.5);
        let allowance = 0.5 / (500f64).sqrt();
        assert!(
            (est.p - exact).abs() <= 4.0 * est.std_error + allowance,
            "oracle {} exact {exact}",
            est.p
        );
    }
}
