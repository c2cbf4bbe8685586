use serde::{Deserialize, Serialize};

/// Streaming mean and variance, mergeable in a fixed order.
///
/// The reported mean is a plain running sum divided by the count, so samples
/// that are ordered element-wise have ordered means. The variance uses
/// Welford's update.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    n: u64,
    sum: f64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Combines two disjoint samples (Chan et al.).
    pub fn merge(&mut self, other: &RunningStats) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        self.sum += other.sum;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.n as f64, other.n as f64);
        self.mean += delta * nb / n as f64;
        self.m2 += other.m2 + delta * delta * na * nb / n as f64;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        (self.m2 / (self.n - 1) as f64).max(0.0)
    }

    pub fn result(&self) -> EstimatorResult {
        EstimatorResult {
            mean: self.mean(),
            std_error: (self.variance() / self.n as f64).sqrt(),
            n_paths: self.n,
        }
    }
}

/// Monte Carlo mean with its standard error `s / sqrt(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub mean: f64,
    pub std_error: f64,
    pub n_paths: u64,
}

impl EstimatorResult {
    /// `|mean - target| / std_error`; infinite when the error is zero and the
    /// values differ.
    pub fn z_score(&self, target: f64) -> f64 {
        z_score(self.mean - target, self.std_error)
    }
}

pub(crate) fn z_score(diff: f64, se: f64) -> f64 {
    if diff == 0.0 {
        0.0
    } else if se == 0.0 {
        f64::INFINITY
    } else {
        diff.abs() / se
    }
}
