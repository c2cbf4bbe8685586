//! Market, option and discretisation data model.
//!
//! A [`MarketModel`] holds `d` assets following correlated geometric Brownian
//! motion whose drifts, volatilities, correlations and barriers are constant
//! on each interval `[t_m, t_{m+1})` of a [`TimeGrid`]. [`validate`] checks
//! every invariant, factorizes the correlation matrix of each regime and
//! returns a [`Validated`] problem that the simulation and pricing code
//! accept.

use std::fmt;
use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues in `[-PSD_REPAIR_TOL, 0)` are clipped to zero; anything more
/// negative is rejected.
pub const PSD_REPAIR_TOL: f64 = 1e-8;

const SYMMETRY_TOL: f64 = 1e-12;

/// Sampling dates `0 = t_0 < t_1 < ... < t_M = T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    dates: Vec<f64>,
}

impl TimeGrid {
    pub fn new(dates: Vec<f64>) -> Result<Self> {
        if dates.len() < 2 {
            return Err(Error::Invalid(vec![
                "time grid needs at least two dates".into()
            ]));
        }
        if dates[0] != 0.0 {
            return Err(Error::Invalid(vec![format!(
                "time grid must start at 0, got {}",
                dates[0]
            )]));
        }
        if let Some(w) = dates.windows(2).find(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(Error::Invalid(vec![format!(
                "time grid must be strictly increasing, found {} -> {}",
                w[0], w[1]
            )]));
        }
        Ok(Self { dates })
    }

    /// `steps` equally spaced intervals on `[0, maturity]`.
    pub fn uniform(maturity: f64, steps: usize) -> Result<Self> {
        if steps == 0 || !(maturity > 0.0) || !maturity.is_finite() {
            return Err(Error::Invalid(vec![format!(
                "uniform grid needs steps >= 1 and maturity > 0 (got {steps}, {maturity})"
            )]));
        }
        let mut dates: Vec<f64> = (0..steps)
            .map(|m| maturity * m as f64 / steps as f64)
            .collect();
        dates.push(maturity);
        Self::new(dates)
    }

    pub fn dates(&self) -> &[f64] {
        &self.dates
    }

    /// Number of intervals `M`.
    pub fn steps(&self) -> usize {
        self.dates.len() - 1
    }

    pub fn maturity(&self) -> f64 {
        self.dates[self.dates.len() - 1]
    }

    /// Length of interval `m`.
    pub fn dt(&self, m: usize) -> f64 {
        self.dates[m + 1] - self.dates[m]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BarrierSide {
    Lower,
    Upper,
}

/// Lower-triangular factor `L` with `L Lᵀ` equal to a (possibly repaired)
/// correlation matrix. Stored row-major as a dense `d x d` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationFactor {
    dim: usize,
    lower: Vec<f64>,
    rank: usize,
}

impl CorrelationFactor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Numerical rank (number of diagonal entries above 1e-12).
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[i * self.dim + j]
    }

    /// Writes `L u` into `out`.
    #[inline]
    pub fn apply(&self, u: &[f64], out: &mut [f64]) {
        let d = self.dim;
        for i in 0..d {
            let row = &self.lower[i * d..i * d + i + 1];
            out[i] = row.iter().zip(&u[..=i]).map(|(l, x)| l * x).sum();
        }
    }

    /// `L Lᵀ` as nested rows.
    pub fn reconstruct(&self) -> Vec<Vec<f64>> {
        let d = self.dim;
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| self.get(i, k) * self.get(j, k)).sum())
                    .collect()
            })
            .collect()
    }
}

/// Factorizes a correlation matrix.
///
/// Positive definite input goes through a plain Cholesky decomposition.
/// Singular input (e.g. `rho = ±1`) goes through the eigendecomposition
/// `V Λ Vᵀ`: `B = V √Λ` is reduced to lower-triangular form by an LQ step so
/// `L Lᵀ = B Bᵀ` still holds. Eigenvalues in `[-1e-8, 0)` are clipped to zero
/// and the result rescaled to unit diagonal.
pub fn factor_correlation(corr: &[Vec<f64>]) -> std::result::Result<CorrelationFactor, f64> {
    let d = corr.len();
    let a = DMatrix::from_fn(d, d, |i, j| corr[i][j]);
    let eig = SymmetricEigen::new(a.clone());
    let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eig < -PSD_REPAIR_TOL {
        return Err(min_eig);
    }

    if min_eig > 1e-12 {
        if let Some(chol) = a.clone().cholesky() {
            let l = chol.l();
            return Ok(pack(d, |i, j| l[(i, j)]));
        }
    }

    let sqrt_vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    let mut b = eig.eigenvectors.clone();
    for (j, s) in sqrt_vals.iter().enumerate() {
        b.column_mut(j).scale_mut(*s);
    }
    // Rescale rows so B Bᵀ has a unit diagonal after clipping.
    for i in 0..d {
        let norm = b.row(i).norm();
        if norm > 0.0 {
            b.row_mut(i).unscale_mut(norm);
        }
    }
    // B = L Q  <=>  Bᵀ = Qᵀ Lᵀ, so L is the transposed R factor of Bᵀ.
    let r = b.transpose().qr().r();
    let mut l = r.transpose();
    for j in 0..d {
        if l[(j, j)] < 0.0 {
            l.column_mut(j).neg_mut();
        }
    }
    Ok(pack(d, |i, j| if j <= i { l[(i, j)] } else { 0.0 }))
}

fn pack(d: usize, f: impl Fn(usize, usize) -> f64) -> CorrelationFactor {
    let mut lower = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            lower[i * d + j] = f(i, j);
        }
    }
    let rank = (0..d).filter(|&i| lower[i * d + i].abs() > 1e-12).count();
    CorrelationFactor { dim: d, lower, rank }
}

/// Parameters on one interval of the grid.
#[derive(Clone, Serialize, Deserialize)]
pub struct Regime {
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
    pub corr: Vec<Vec<f64>>,
    pub lower: Vec<Option<f64>>,
    pub upper: Vec<Option<f64>>,
    #[serde(skip)]
    factor: OnceLock<CorrelationFactor>,
}

impl fmt::Debug for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Regime")
            .field("mu", &self.mu)
            .field("sigma", &self.sigma)
            .field("corr", &self.corr)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .finish()
    }
}

impl PartialEq for Regime {
    fn eq(&self, other: &Self) -> bool {
        self.mu == other.mu
            && self.sigma == other.sigma
            && self.corr == other.corr
            && self.lower == other.lower
            && self.upper == other.upper
    }
}

impl Regime {
    pub fn new(
        mu: Vec<f64>,
        sigma: Vec<f64>,
        corr: Vec<Vec<f64>>,
        lower: Vec<Option<f64>>,
        upper: Vec<Option<f64>>,
    ) -> Self {
        Self {
            mu,
            sigma,
            corr,
            lower,
            upper,
            factor: OnceLock::new(),
        }
    }

    /// Barrier-free regime with a common drift and the given volatilities and
    /// correlation matrix.
    pub fn free(drift: f64, sigma: Vec<f64>, corr: Vec<Vec<f64>>) -> Self {
        let d = sigma.len();
        Self::new(vec![drift; d], sigma, corr, vec![None; d], vec![None; d])
    }

    /// Equicorrelated matrix with off-diagonal `rho`.
    pub fn equicorrelation(d: usize, rho: f64) -> Vec<Vec<f64>> {
        (0..d)
            .map(|i| (0..d).map(|j| if i == j { 1.0 } else { rho }).collect())
            .collect()
    }

    pub fn with_lower(mut self, asset: usize, level: f64) -> Self {
        self.lower[asset] = Some(level);
        self
    }

    pub fn with_upper(mut self, asset: usize, level: f64) -> Self {
        self.upper[asset] = Some(level);
        self
    }

    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    pub fn barrier(&self, asset: usize, side: BarrierSide) -> Option<f64> {
        match side {
            BarrierSide::Lower => self.lower[asset],
            BarrierSide::Upper => self.upper[asset],
        }
    }

    /// Number of active barrier events (an asset with both barriers counts twice).
    pub fn event_count(&self) -> usize {
        self.lower.iter().flatten().count() + self.upper.iter().flatten().count()
    }

    /// True if `price` lies strictly between the barriers of `asset`.
    #[inline]
    pub fn strictly_inside(&self, asset: usize, price: f64) -> bool {
        self.lower[asset].is_none_or(|h| price > h) && self.upper[asset].is_none_or(|h| price < h)
    }

    /// Cached correlation factor; computed on first use.
    pub fn factor(&self) -> std::result::Result<&CorrelationFactor, f64> {
        if let Some(f) = self.factor.get() {
            return Ok(f);
        }
        let f = factor_correlation(&self.corr)?;
        Ok(self.factor.get_or_init(|| f))
    }

    fn violations(&self, d: usize, index: usize, out: &mut Vec<String>) {
        let tag = format!("regime {index}");
        for (name, len) in [
            ("mu", self.mu.len()),
            ("sigma", self.sigma.len()),
            ("lower", self.lower.len()),
            ("upper", self.upper.len()),
            ("corr", self.corr.len()),
        ] {
            if len != d {
                out.push(format!("{tag}: {name} has length {len}, expected {d}"));
            }
        }
        if !out.is_empty() {
            return;
        }
        for i in 0..d {
            if !self.mu[i].is_finite() {
                out.push(format!("{tag}: mu[{i}] is not finite"));
            }
            if !(self.sigma[i] >= 0.0) || !self.sigma[i].is_finite() {
                out.push(format!("{tag}: sigma[{i}] = {} must be >= 0", self.sigma[i]));
            }
            for (side, b) in [("lower", self.lower[i]), ("upper", self.upper[i])] {
                if let Some(b) = b {
                    if !(b > 0.0) || !b.is_finite() {
                        out.push(format!("{tag}: {side}[{i}] = {b} must be a positive price"));
                    }
                }
            }
            if let (Some(h), Some(hh)) = (self.lower[i], self.upper[i]) {
                if !(h < hh) {
                    out.push(format!("{tag}: asset {i} lower barrier {h} is not below upper {hh}"));
                }
            }
            if self.corr[i].len() != d {
                out.push(format!("{tag}: corr row {i} has length {}", self.corr[i].len()));
                continue;
            }
            if self.corr[i][i] != 1.0 {
                out.push(format!("{tag}: corr[{i}][{i}] = {} must be 1", self.corr[i][i]));
            }
            for j in 0..d {
                let c = self.corr[i][j];
                if !(-1.0..=1.0).contains(&c) {
                    out.push(format!("{tag}: corr[{i}][{j}] = {c} outside [-1, 1]"));
                }
                if j < i && self.corr[j].len() == d && (c - self.corr[j][i]).abs() > SYMMETRY_TOL {
                    out.push(format!("{tag}: corr is not symmetric at ({i}, {j})"));
                }
            }
        }
    }
}

/// Market data: spots, risk-free rate, grid and one regime per interval.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketModel {
    pub spot: Vec<f64>,
    pub rate: f64,
    pub grid: TimeGrid,
    pub regimes: Vec<Arc<Regime>>,
}

impl MarketModel {
    pub fn new(spot: Vec<f64>, rate: f64, grid: TimeGrid, regimes: Vec<Arc<Regime>>) -> Self {
        Self {
            spot,
            rate,
            grid,
            regimes,
        }
    }

    /// One regime shared by all `steps` equally spaced intervals.
    pub fn constant(spot: Vec<f64>, rate: f64, maturity: f64, steps: usize, regime: Regime) -> Result<Self> {
        let grid = TimeGrid::uniform(maturity, steps)?;
        let regime = Arc::new(regime);
        Ok(Self::new(spot, rate, grid, vec![regime; steps]))
    }

    /// Same model on a uniform grid with `steps` intervals. Only defined when
    /// all intervals share one regime.
    pub fn with_steps(&self, steps: usize) -> Result<Self> {
        let first = self
            .regimes
            .first()
            .ok_or_else(|| Error::Invalid(vec!["model has no regimes".into()]))?;
        if self.regimes.iter().any(|r| !Arc::ptr_eq(r, first) && **r != **first) {
            return Err(Error::Config(
                "changing the step count requires a single constant regime".into(),
            ));
        }
        let grid = TimeGrid::uniform(self.grid.maturity(), steps)?;
        Ok(Self::new(self.spot.clone(), self.rate, grid, vec![first.clone(); steps]))
    }

    pub fn dim(&self) -> usize {
        self.spot.len()
    }

    pub fn steps(&self) -> usize {
        self.grid.steps()
    }

    pub fn maturity(&self) -> f64 {
        self.grid.maturity()
    }

    /// `e^{-rT}`.
    pub fn discount(&self) -> f64 {
        (-self.rate * self.maturity()).exp()
    }

    /// Regime whose barriers apply at sampling date `m` (the last interval's
    /// regime at maturity).
    pub fn regime_at_date(&self, m: usize) -> &Regime {
        &self.regimes[m.min(self.regimes.len() - 1)]
    }
}

/// Payoff at maturity, before discounting.
#[derive(Clone)]
pub enum Payoff {
    /// `max(S_k(T) - K, 0)`.
    Call { asset: usize },
    /// Pays 1 when `S_k(T) > K`; with `K = 0` it always pays 1.
    Digital { asset: usize },
    /// User hook `f(terminal prices, strike)`.
    Custom(Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payoff::Call { asset } => write!(f, "Call {{ asset: {asset} }}"),
            Payoff::Digital { asset } => write!(f, "Digital {{ asset: {asset} }}"),
            Payoff::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KnockType {
    Out,
    In,
}

#[derive(Debug, Clone)]
pub struct OptionSpec {
    pub payoff: Payoff,
    pub strike: f64,
    pub knock: KnockType,
    /// Paid at maturity when the option knocks out.
    pub rebate: f64,
}

impl OptionSpec {
    pub fn call(asset: usize, strike: f64) -> Self {
        Self {
            payoff: Payoff::Call { asset },
            strike,
            knock: KnockType::Out,
            rebate: 0.0,
        }
    }

    pub fn digital(asset: usize, strike: f64) -> Self {
        Self {
            payoff: Payoff::Digital { asset },
            ..Self::call(asset, strike)
        }
    }

    pub fn custom(strike: f64, f: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            payoff: Payoff::Custom(Arc::new(f)),
            ..Self::call(0, strike)
        }
    }

    pub fn knock_in(mut self) -> Self {
        self.knock = KnockType::In;
        self
    }

    pub fn with_rebate(mut self, rebate: f64) -> Self {
        self.rebate = rebate;
        self
    }

    /// Undiscounted payoff at the terminal prices.
    #[inline]
    pub fn payoff_at(&self, terminal: &[f64]) -> f64 {
        match &self.payoff {
            Payoff::Call { asset } => (terminal[*asset] - self.strike).max(0.0),
            Payoff::Digital { asset } => {
                if terminal[*asset] > self.strike {
                    1.0
                } else {
                    0.0
                }
            }
            Payoff::Custom(f) => f(terminal, self.strike),
        }
    }

    fn violations(&self, d: usize, out: &mut Vec<String>) {
        if !(self.strike >= 0.0) {
            out.push(format!("strike {} must be >= 0", self.strike));
        }
        if !(self.rebate >= 0.0) {
            out.push(format!("rebate {} must be >= 0", self.rebate));
        }
        match self.payoff {
            Payoff::Call { asset } | Payoff::Digital { asset } if asset >= d => {
                out.push(format!("payoff asset {asset} out of range for {d} assets"));
            }
            _ => {}
        }
    }
}

/// List of violated invariants; empty when the problem is well formed.
///
/// Spot/barrier placement and correlation positive semi-definiteness are not
/// listed here; [`validate`] reports them as hard errors.
pub fn violations(model: &MarketModel, option: &OptionSpec) -> Vec<String> {
    let d = model.dim();
    let mut out = Vec::new();
    if d == 0 {
        out.push("model has no assets".into());
        return out;
    }
    for (i, s) in model.spot.iter().enumerate() {
        if !(*s > 0.0) || !s.is_finite() {
            out.push(format!("spot[{i}] = {s} must be > 0"));
        }
    }
    if !model.rate.is_finite() {
        out.push("rate is not finite".into());
    }
    if model.regimes.len() != model.steps() {
        out.push(format!(
            "{} regimes for {} intervals",
            model.regimes.len(),
            model.steps()
        ));
    }
    for (m, regime) in model.regimes.iter().enumerate() {
        if m > 0 && Arc::ptr_eq(regime, &model.regimes[m - 1]) {
            continue;
        }
        regime.violations(d, m, &mut out);
    }
    option.violations(d, &mut out);
    out
}

/// A model/option pair that passed validation, with every correlation
/// factor cached. Immutable and shareable across threads.
#[derive(Debug, Clone)]
pub struct Validated {
    model: MarketModel,
    option: OptionSpec,
}

impl Validated {
    pub fn model(&self) -> &MarketModel {
        &self.model
    }

    pub fn option(&self) -> &OptionSpec {
        &self.option
    }

    pub fn factor(&self, m: usize) -> &CorrelationFactor {
        self.model.regimes[m]
            .factor()
            .expect("validated regimes always have a factor")
    }

    /// Same problem with a different option.
    pub fn with_option(&self, option: OptionSpec) -> Result<Self> {
        validate(&self.model, &option)
    }

    /// True when every interval carries at most one barrier event, so the
    /// exact marginal no-hit probability applies.
    pub fn single_event_per_interval(&self) -> bool {
        self.model.regimes.iter().all(|r| r.event_count() <= 1)
    }
}

/// Validates the model and option and factorizes every regime's correlation.
pub fn validate(model: &MarketModel, option: &OptionSpec) -> Result<Validated> {
    let problems = violations(model, option);
    if !problems.is_empty() {
        return Err(Error::Invalid(problems));
    }
    let first = &model.regimes[0];
    for (asset, &spot) in model.spot.iter().enumerate() {
        if !first.strictly_inside(asset, spot) {
            return Err(Error::SpotOutsideBarrier { asset, spot });
        }
    }
    for (m, regime) in model.regimes.iter().enumerate() {
        regime.factor().map_err(|min_eigenvalue| Error::NotPsd {
            regime: m,
            min_eigenvalue,
        })?;
    }
    Ok(Validated {
        model: model.clone(),
        option: option.clone(),
    })
}
