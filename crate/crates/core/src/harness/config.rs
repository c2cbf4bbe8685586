//! JSON configuration files.
//!
//! ```json
//! {
//!   "name": "table1a",
//!   "assets": 1,
//!   "spot": [100.0],
//!   "rate": 0.1,
//!   "grid": { "maturity": 0.5, "steps": 1 },
//!   "regimes": [
//!     { "mu": [0.1], "sigma": [0.3], "corr": [[1.0]], "lower": [90.0], "upper": [null] }
//!   ],
//!   "option": { "kind": "call", "asset": 0, "strike": 100.0, "knock": "out", "rebate": 0.0 },
//!   "paths": 400000,
//!   "m": [1, 2, 4, 16, 64, 256, 1024]
//! }
//! ```
//!
//! `grid` is either `{ "maturity", "steps" }` (equal spacing) or
//! `{ "dates": [...] }`. `regimes` holds one entry per interval, or a single
//! entry shared by all intervals. `mu` defaults to the rate, `lower` and
//! `upper` default to no barriers. `paths`, `seed` and `m` are run defaults
//! used by the harness.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate, KnockType, MarketModel, OptionSpec, Payoff, Regime, TimeGrid, Validated};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Uniform { maturity: f64, steps: usize },
    Dates { dates: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
    pub sigma: Vec<f64>,
    pub corr: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<Vec<Option<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Vec<Option<f64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PayoffKind {
    Call,
    Digital,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptionFile {
    pub kind: PayoffKind,
    #[serde(default)]
    pub asset: usize,
    pub strike: f64,
    #[serde(default = "default_knock")]
    pub knock: KnockType,
    #[serde(default)]
    pub rebate: f64,
}

fn default_knock() -> KnockType {
    KnockType::Out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub assets: usize,
    pub spot: Vec<f64>,
    pub rate: f64,
    pub grid: GridSpec,
    pub regimes: Vec<RegimeSpec>,
    pub option: OptionFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<usize>>,
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// One of the shipped configurations, by file stem (e.g. `table3_rho0.5`).
    pub fn builtin(name: &str) -> Result<Self> {
        let text = BUILTIN
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| Error::Config(format!("no shipped configuration named {name}")))?;
        Self::from_json(text)
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| "config".into())
    }

    pub fn build(&self) -> Result<(MarketModel, OptionSpec)> {
        let d = self.assets;
        if self.spot.len() != d {
            return Err(Error::Config(format!(
                "assets = {d} but spot has {} entries",
                self.spot.len()
            )));
        }
        let grid = match &self.grid {
            GridSpec::Uniform { maturity, steps } => TimeGrid::uniform(*maturity, *steps)?,
            GridSpec::Dates { dates } => TimeGrid::new(dates.clone())?,
        };
        let regimes: Vec<Arc<Regime>> = self
            .regimes
            .iter()
            .map(|r| {
                Arc::new(Regime::new(
                    r.mu.clone().unwrap_or_else(|| vec![self.rate; d]),
                    r.sigma.clone(),
                    r.corr.clone(),
                    r.lower.clone().unwrap_or_else(|| vec![None; d]),
                    r.upper.clone().unwrap_or_else(|| vec![None; d]),
                ))
            })
            .collect();
        let regimes = match regimes.len() {
            1 => vec![regimes[0].clone(); grid.steps()],
            n if n == grid.steps() => regimes,
            n => {
                return Err(Error::Config(format!(
                    "{n} regimes for {} intervals; give one per interval or a single shared regime",
                    grid.steps()
                )))
            }
        };
        let model = MarketModel::new(self.spot.clone(), self.rate, grid, regimes);
        let o = &self.option;
        let option = OptionSpec {
            payoff: match o.kind {
                PayoffKind::Call => Payoff::Call { asset: o.asset },
                PayoffKind::Digital => Payoff::Digital { asset: o.asset },
            },
            strike: o.strike,
            knock: o.knock,
            rebate: o.rebate,
        };
        Ok((model, option))
    }

    pub fn validated(&self) -> Result<Validated> {
        let (model, option) = self.build()?;
        validate(&model, &option)
    }

    /// Validated problem on a uniform grid with `steps` intervals.
    pub fn validated_with_steps(&self, steps: usize) -> Result<Validated> {
        let (model, option) = self.build()?;
        validate(&model.with_steps(steps)?, &option)
    }
}

macro_rules! shipped {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/", $name, ".json")))),*]
    };
}

/// Shipped configurations keyed by file stem.
pub const BUILTIN: &[(&str, &str)] = shipped!(
    "table1a",
    "table1b",
    "table2",
    "table3_rho-1",
    "table3_rho-0.5",
    "table3_rho0",
    "table3_rho0.5",
    "table3_rho1",
    "table4_d3",
    "table4_d10",
    "fig5",
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_shipped_config_validates() {
        for (name, _) in BUILTIN {
            let cfg = ConfigFile::builtin(name).unwrap();
            assert_eq!(cfg.name.as_deref(), Some(*name));
            cfg.validated().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn defaults_fill_in() {
        let cfg = ConfigFile::from_json(
            r#"{"assets":1,"spot":[100],"rate":0.05,"grid":{"maturity":1,"steps":3},
                "regimes":[{"sigma":[0.2],"corr":[[1]]}],
                "option":{"kind":"call","strike":100}}"#,
        )
        .unwrap();
        let (model, option) = cfg.build().unwrap();
        assert_eq!(model.regimes.len(), 3);
        assert_eq!(model.regimes[2].mu, vec![0.05]);
        assert_eq!(model.regimes[0].lower, vec![None]);
        assert_eq!(option.knock, KnockType::Out);
        assert_eq!(option.rebate, 0.0);
    }

    #[test]
    fn explicit_dates_and_per_interval_regimes() {
        let cfg = ConfigFile::from_json(
            r#"{"assets":1,"spot":[100],"rate":0.05,"grid":{"dates":[0,0.25,1]},
                "regimes":[{"sigma":[0.2],"corr":[[1]],"lower":[80]},
                           {"sigma":[0.3],"corr":[[1]],"lower":[null],"upper":[150]}],
                "option":{"kind":"digital","strike":0,"knock":"in","rebate":1}}"#,
        )
        .unwrap();
        let p = cfg.validated().unwrap();
        assert_eq!(p.model().regimes[1].upper, vec![Some(150.0)]);
        assert!(p.model().with_steps(4).is_err());
    }

    #[test]
    fn mismatched_regime_count_is_rejected() {
        let cfg = ConfigFile::from_json(
            r#"{"assets":1,"spot":[100],"rate":0.05,"grid":{"maturity":1,"steps":3},
                "regimes":[{"sigma":[0.2],"corr":[[1]]},{"sigma":[0.2],"corr":[[1]]}],
                "option":{"kind":"call","strike":100}}"#,
        )
        .unwrap();
        assert!(matches!(cfg.build(), Err(Error::Config(_))));
    }

    #[test]
    fn json_round_trip() {
        let cfg = ConfigFile::builtin("table2").unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ConfigFile::from_json(&text).unwrap(), cfg);
    }
}
