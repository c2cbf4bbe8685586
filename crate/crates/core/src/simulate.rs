//! Correlated GBM paths at the sampling dates.
//!
//! Every path owns an independent ChaCha8 stream selected by
//! `(seed, path_index)`; within the stream the normal for `(step, asset)` is
//! the `step * d + asset`-th draw. A path is therefore a pure function of
//! `(seed, path_index)` and results never depend on how paths are spread
//! across worker threads.

use std::ops::Range;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::model::{Regime, Validated};
use crate::normal;

/// Paths per work item. Fixed so reductions have the same shape for any
/// thread count.
pub const CHUNK_PATHS: u64 = 4096;

/// One step of the exact GBM recursion
/// `S' = S exp((mu - sigma^2/2) dt + sigma sqrt(dt) z)` for correlated draws `z`.
pub fn step(prev: &[f64], regime: &Regime, dt: f64, z: &[f64]) -> Vec<f64> {
    prev.iter()
        .enumerate()
        .map(|(i, s)| {
            let sig = regime.sigma[i];
            s * ((regime.mu[i] - 0.5 * sig * sig) * dt + sig * dt.sqrt() * z[i]).exp()
        })
        .collect()
}

/// Uniform on the open interval (0, 1) from the top 52 bits of a word.
#[inline]
pub fn open_unit(word: u64) -> f64 {
    ((word >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// Independent random stream for one path.
pub struct PathRng(ChaCha8Rng);

impl PathRng {
    pub fn new(seed: u64, path_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(path_index);
        Self(rng)
    }

    #[inline]
    pub fn uniform(&mut self) -> f64 {
        open_unit(self.0.next_u64())
    }

    #[inline]
    pub fn normal(&mut self) -> f64 {
        normal::inverse_cdf(self.uniform())
    }
}

/// One simulated trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct PathState {
    /// `(M + 1) x d` prices, row `m` is date `t_m`.
    pub values: Vec<Vec<f64>>,
    /// Discrete-monitoring survival indicator: every sampled price strictly
    /// inside that date's barriers.
    pub alive_discrete: bool,
    pub path_index: u64,
}

struct IntervalCoeffs {
    drift: Vec<f64>,
    vol: Vec<f64>,
}

/// Reusable per-path storage.
#[derive(Debug, Clone)]
pub struct PathBuffer {
    d: usize,
    logs: Vec<f64>,
    prices: Vec<f64>,
    uniform: Vec<f64>,
    corr: Vec<f64>,
    alive: bool,
}

impl PathBuffer {
    pub fn new(d: usize, steps: usize) -> Self {
        Self {
            d,
            logs: vec![0.0; d * (steps + 1)],
            prices: vec![0.0; d * (steps + 1)],
            uniform: vec![0.0; d],
            corr: vec![0.0; d],
            alive: true,
        }
    }

    #[inline]
    pub fn log_prices(&self, m: usize) -> &[f64] {
        &self.logs[m * self.d..(m + 1) * self.d]
    }

    #[inline]
    pub fn prices(&self, m: usize) -> &[f64] {
        &self.prices[m * self.d..(m + 1) * self.d]
    }

    pub fn alive_discrete(&self) -> bool {
        self.alive
    }
}

/// Precomputed step coefficients for a validated problem.
pub struct PathGenerator<'a> {
    problem: &'a Validated,
    seed: u64,
    log_spot: Vec<f64>,
    coeffs: Vec<IntervalCoeffs>,
}

impl<'a> PathGenerator<'a> {
    pub fn new(problem: &'a Validated, seed: u64) -> Self {
        let model = problem.model();
        let coeffs = (0..model.steps())
            .map(|m| {
                let r = &model.regimes[m];
                let dt = model.grid.dt(m);
                IntervalCoeffs {
                    drift: r
                        .mu
                        .iter()
                        .zip(&r.sigma)
                        .map(|(mu, s)| (mu - 0.5 * s * s) * dt)
                        .collect(),
                    vol: r.sigma.iter().map(|s| s * dt.sqrt()).collect(),
                }
            })
            .collect();
        Self {
            problem,
            seed,
            log_spot: model.spot.iter().map(|s| s.ln()).collect(),
            coeffs,
        }
    }

    pub fn problem(&self) -> &Validated {
        self.problem
    }

    pub fn buffer(&self) -> PathBuffer {
        let m = self.problem.model();
        PathBuffer::new(m.dim(), m.steps())
    }

    /// Simulates path `path_index` into `buf`, working in log prices.
    pub fn fill(&self, path_index: u64, buf: &mut PathBuffer) {
        let model = self.problem.model();
        let d = model.dim();
        let mut rng = PathRng::new(self.seed, path_index);

        buf.logs[..d].copy_from_slice(&self.log_spot);
        buf.prices[..d].copy_from_slice(&model.spot);
        let mut alive = (0..d).all(|i| model.regime_at_date(0).strictly_inside(i, model.spot[i]));

        for (m, c) in self.coeffs.iter().enumerate() {
            for u in buf.uniform.iter_mut() {
                *u = rng.normal();
            }
            self.problem.factor(m).apply(&buf.uniform, &mut buf.corr);
            let (head, tail) = buf.logs.split_at_mut((m + 1) * d);
            let prev = &head[m * d..];
            let next = &mut tail[..d];
            let prices = &mut buf.prices[(m + 1) * d..(m + 2) * d];
            let at_date = model.regime_at_date(m + 1);
            for i in 0..d {
                next[i] = prev[i] + c.drift[i] + c.vol[i] * buf.corr[i];
                prices[i] = next[i].exp();
                alive &= at_date.strictly_inside(i, prices[i]);
            }
        }
        buf.alive = alive;
    }

    pub fn path(&self, path_index: u64) -> PathState {
        let mut buf = self.buffer();
        self.fill(path_index, &mut buf);
        let steps = self.problem.model().steps();
        PathState {
            values: (0..=steps).map(|m| buf.prices(m).to_vec()).collect(),
            alive_discrete: buf.alive,
            path_index,
        }
    }
}

/// Simulates one path of a validated problem.
pub fn simulate_path(problem: &Validated, seed: u64, path_index: u64) -> PathState {
    PathGenerator::new(problem, seed).path(path_index)
}

/// Splits `0..n_paths` into fixed chunks, maps them in parallel and returns
/// the results in path order.
pub fn map_chunks<T, F>(n_paths: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    let chunks = n_paths.div_ceil(CHUNK_PATHS);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK_PATHS;
            f(start..(start + CHUNK_PATHS).min(n_paths))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate, MarketModel, OptionSpec};

    fn problem(sigma: f64, steps: usize) -> Validated {
        let regime = Regime::free(0.1, vec![sigma], vec![vec![1.0]]).with_lower(0, 90.0);
        let model = MarketModel::constant(vec![100.0], 0.1, 0.5, steps, regime).unwrap();
        validate(&model, &OptionSpec::call(0, 100.0)).unwrap()
    }

    #[test]
    fn drift_only_step() {
        let r = Regime::free(0.1, vec![0.0], vec![vec![1.0]]);
        let s = step(&[100.0], &r, 1.0, &[1.3]);
        assert!((s[0] - 110.517_091_807_564_76).abs() < 1e-10);
    }

    #[test]
    fn zero_draw_step() {
        let r = Regime::free(0.1, vec![0.3], vec![vec![1.0]]);
        let s = step(&[100.0], &r, 0.5, &[0.0]);
        // 100 * exp(0.0275)
        assert!((s[0] - 102.788_161_510_725_27).abs() < 1e-10, "{}", s[0]);
    }

    #[test]
    fn zero_volatility_path_is_deterministic() {
        let p = problem(0.0, 1);
        let a = simulate_path(&p, 1, 0);
        let b = simulate_path(&p, 99, 12345);
        assert_eq!(a.values, b.values);
        assert_eq!(a.values[0], vec![100.0]);
        assert!((a.values[1][0] - 100.0 * (0.05f64).exp()).abs() < 1e-10);
        assert!(a.alive_discrete);
    }

    #[test]
    fn path_invariants() {
        let p = problem(0.3, 16);
        let gen = PathGenerator::new(&p, 7);
        for idx in 0..200 {
            let s = gen.path(idx);
            assert_eq!(s.values[0], vec![100.0]);
            assert!(s.values.iter().flatten().all(|v| *v > 0.0));
            let inside = s.values.iter().all(|row| row[0] > 90.0);
            assert_eq!(inside, s.alive_discrete);
        }
    }

    #[test]
    fn streams_are_keyed_by_seed_and_index() {
        let p = problem(0.3, 4);
        assert_eq!(simulate_path(&p, 3, 10), simulate_path(&p, 3, 10));
        assert_ne!(simulate_path(&p, 3, 10), simulate_path(&p, 3, 11));
        assert_ne!(simulate_path(&p, 3, 10), simulate_path(&p, 4, 10));
    }

    #[test]
    fn chunk_map_preserves_order() {
        let out = map_chunks(3 * CHUNK_PATHS + 5, |r| r.start);
        assert_eq!(out, vec![0, CHUNK_PATHS, 2 * CHUNK_PATHS, 3 * CHUNK_PATHS]);
    }

    #[test]
    fn open_unit_never_hits_endpoints() {
        assert!(open_unit(0) > 0.0);
        assert!(open_unit(u64::MAX) < 1.0);
    }
}
