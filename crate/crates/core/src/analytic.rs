//! Closed-form reference prices under Black-Scholes dynamics.
//!
//! Single-barrier knock-outs use the method of images: for a payoff that
//! vanishes at or below the barrier `h`,
//! `KO(S) = E(S) - (h/S)^{2r/sigma^2 - 1} E(h^2/S)` where `E` is the barrier-free
//! value of the same payoff.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal::cdf;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsParams {
    pub spot: f64,
    pub strike: f64,
    pub barrier: Option<f64>,
    pub sigma: f64,
    pub rate: f64,
    pub maturity: f64,
}

impl BsParams {
    pub fn new(spot: f64, strike: f64, sigma: f64, rate: f64, maturity: f64) -> Self {
        Self {
            spot,
            strike,
            barrier: None,
            sigma,
            rate,
            maturity,
        }
    }

    pub fn with_barrier(mut self, barrier: f64) -> Self {
        self.barrier = Some(barrier);
        self
    }

    fn at_spot(&self, spot: f64) -> Self {
        Self { spot, ..*self }
    }

    fn discount(&self) -> f64 {
        (-self.rate * self.maturity).exp()
    }

    fn lower_barrier(&self) -> Result<f64> {
        let h = self
            .barrier
            .ok_or_else(|| Error::Analytic("a barrier is required".into()))?;
        if !(h < self.spot) {
            return Err(Error::Analytic(format!(
                "barrier {h} must lie below spot {}",
                self.spot
            )));
        }
        Ok(h)
    }

    /// Reflection weight `(h/S)^{2r/sigma^2 - 1}`.
    fn image_weight(&self, h: f64) -> f64 {
        (h / self.spot).powf(2.0 * self.rate / (self.sigma * self.sigma) - 1.0)
    }
}

/// Black-Scholes call. The `sigma -> 0` and `strike -> 0` limits are handled
/// explicitly.
pub fn vanilla_call(p: &BsParams) -> f64 {
    let df = p.discount();
    let forward = p.spot / df;
    let sd = p.sigma * p.maturity.sqrt();
    if p.strike <= 0.0 {
        return p.spot - p.strike * df;
    }
    if sd <= 0.0 {
        return df * (forward - p.strike).max(0.0);
    }
    let d1 = ((forward / p.strike).ln() + 0.5 * sd * sd) / sd;
    let d2 = d1 - sd;
    p.spot * cdf(d1) - p.strike * df * cdf(d2)
}

/// Cash-or-nothing digital paying 1 when `S(T) > strike`.
pub fn digital_call(p: &BsParams) -> f64 {
    let df = p.discount();
    if p.strike <= 0.0 {
        return df;
    }
    let sd = p.sigma * p.maturity.sqrt();
    let forward = p.spot / df;
    if sd <= 0.0 {
        return if forward > p.strike { df } else { 0.0 };
    }
    let d2 = ((forward / p.strike).ln() - 0.5 * sd * sd) / sd;
    df * cdf(d2)
}

/// Down-and-out call with a continuously monitored lower barrier.
///
/// For `h <= K` the call payoff already vanishes below the barrier; for
/// `h > K` the payoff is split as `(S - h)^+ + (h - K) 1{S > h}` before
/// reflecting.
pub fn down_and_out_call(p: &BsParams) -> Result<f64> {
    let h = p.lower_barrier()?;
    let above_barrier = |q: &BsParams| {
        if h <= p.strike {
            vanilla_call(q)
        } else {
            let at_h = BsParams { strike: h, ..*q };
            vanilla_call(&at_h) + (h - p.strike) * digital_call(&at_h)
        }
    };
    let value = above_barrier(p) - p.image_weight(h) * above_barrier(&p.at_spot(h * h / p.spot));
    Ok(value.max(0.0))
}

/// Down-and-out digital: `e^{-rT} P(min_{[0,T]} S > h)`; the strike is ignored.
pub fn down_and_out_digital(p: &BsParams) -> Result<f64> {
    let h = p.lower_barrier()?;
    let at_h = BsParams { strike: h, ..*p };
    let value = digital_call(&at_h) - p.image_weight(h) * digital_call(&at_h.at_spot(h * h / p.spot));
    Ok(value.max(0.0))
}

/// Golden value for the two-asset down-and-out call at `rho = -1` (double
/// knock-out with an exponential upper barrier, not evaluated here).
pub const TWO_ASSET_RHO_MINUS_ONE: f64 = 0.0131;
/// Golden values at `rho = -0.5` and `rho = 0.5` (two-dimensional density
/// integration, not evaluated here).
pub const TWO_ASSET_RHO_MINUS_HALF: f64 = 1.395;
pub const TWO_ASSET_RHO_HALF: f64 = 6.527;
/// Single-asset double knock-out call, `h = 900`, `H = 1100`.
pub const DOUBLE_KNOCK_OUT: f64 = 1.793;
/// Two-asset call with a single barrier on the second asset (`rho = 0.5`).
pub const SINGLE_BARRIER_ON_SECOND_ASSET: f64 = 8.256;

/// Symmetric two-asset down-and-out call: payoff on asset 1, equal lower
/// barriers `h` on both assets, equal volatilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoAssetConfig {
    pub spot: f64,
    pub strike: f64,
    pub barrier: f64,
    pub sigma: f64,
    pub rate: f64,
    pub maturity: f64,
}

impl Default for TwoAssetConfig {
    fn default() -> Self {
        Self {
            spot: 100.0,
            strike: 100.0,
            barrier: 90.0,
            sigma: 0.3,
            rate: 0.1,
            maturity: 1.0,
        }
    }
}

/// Continuously monitored reference price of the two-asset option at
/// `rho` in {-1, 0, 1}.
///
/// `rho = 1` collapses to a down-and-out call on asset 1; `rho = 0` factors
/// into that call times the risk-neutral survival probability of asset 2;
/// `rho = -1` returns the stored golden constant.
pub fn reference_price(rho: f64, cfg: &TwoAssetConfig) -> Result<f64> {
    let p = BsParams::new(cfg.spot, cfg.strike, cfg.sigma, cfg.rate, cfg.maturity).with_barrier(cfg.barrier);
    if rho == 1.0 {
        down_and_out_call(&p)
    } else if rho == 0.0 {
        let survival = down_and_out_digital(&p)? / p.discount();
        Ok(down_and_out_call(&p)? * survival)
    } else if rho == -1.0 {
        Ok(TWO_ASSET_RHO_MINUS_ONE)
    } else {
        Err(Error::Analytic(format!(
            "no closed form for rho = {rho}; only -1, 0 and 1 are supported"
        )))
    }
}
