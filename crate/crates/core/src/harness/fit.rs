//! Convergence-rate fits of the bound gap `Q_U - Q_L` against the number of
//! monitoring dates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::sweep::{Record, SweepRow};

/// Gaps below this many standard errors are treated as noise.
pub const NOISE_FLOOR: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitKind {
    /// `ln gap` linear in `M`.
    Exponential,
    /// `ln gap` linear in `ln M`.
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    pub m: usize,
    pub gap: f64,
    pub std_error: f64,
}

impl GapPoint {
    pub fn usable(&self) -> bool {
        self.gap > NOISE_FLOOR * self.std_error && self.gap > 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceFit {
    pub kind: FitKind,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Points that passed the noise floor and entered the fit.
    pub points: Vec<GapPoint>,
}

pub fn gap_points(rows: &[SweepRow]) -> Vec<GapPoint> {
    rows.iter()
        .map(|r| GapPoint {
            m: r.m,
            gap: r.report.gap.mean,
            std_error: r.report.gap.std_error,
        })
        .collect()
}

/// Gap points from CSV records. With several tables in one file, `table`
/// selects one of them.
pub fn gap_points_from_records(records: &[Record], table: Option<&str>) -> Vec<GapPoint> {
    records
        .iter()
        .filter(|r| r.estimator == "gap" && table.is_none_or(|t| r.table == t))
        .map(|r| GapPoint {
            m: r.m,
            gap: r.mean,
            std_error: r.std_error,
        })
        .collect()
}

/// Ordinary least squares of `ln gap` against `M` or `ln M` over the points
/// above the noise floor.
pub fn fit_convergence(points: &[GapPoint], kind: FitKind) -> Result<ConvergenceFit> {
    let used: Vec<GapPoint> = points.iter().copied().filter(GapPoint::usable).collect();
    if used.len() < 3 {
        return Err(Error::TooFewPoints { usable: used.len() });
    }
    let xs: Vec<f64> = used
        .iter()
        .map(|p| match kind {
            FitKind::Exponential => p.m as f64,
            FitKind::Power => (p.m as f64).ln(),
        })
        .collect();
    let ys: Vec<f64> = used.iter().map(|p| p.gap.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::TooFewPoints { usable: 1 });
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(ConvergenceFit {
        kind,
        slope,
        intercept: my - slope * mx,
        r_squared,
        points: used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(f: impl Fn(f64) -> f64, ms: &[usize]) -> Vec<GapPoint> {
        ms.iter()
            .map(|&m| GapPoint {
                m,
                gap: f(m as f64),
                std_error: 1e-9,
            })
            .collect()
    }

    #[test]
    fn recovers_power_law() {
        let p = pts(|m| 3.0 * m.powf(-2.0), &[1, 2, 4, 8, 16]);
        let fit = fit_convergence(&p, FitKind::Power).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn recovers_exponential() {
        let p = pts(|m| 2.0 * (-0.3 * m).exp(), &[1, 2, 4, 8]);
        let fit = fit_convergence(&p, FitKind::Exponential).unwrap();
        assert!((fit.slope + 0.3).abs() < 1e-12);
    }

    #[test]
    fn noisy_points_are_dropped() {
        let mut p = pts(|m| m.powf(-0.5), &[1, 4, 16, 64]);
        p.push(GapPoint {
            m: 256,
            gap: 0.01,
            std_error: 0.005,
        });
        let fit = fit_convergence(&p, FitKind::Power).unwrap();
        assert_eq!(fit.points.len(), 4);
        p.truncate(2);
        assert!(matches!(
            fit_convergence(&p, FitKind::Power),
            Err(Error::TooFewPoints { usable: 2 })
        ));
    }

    proptest! {
        #[test]
        fn r_squared_in_unit_interval(gaps in proptest::collection::vec(1e-6f64..10.0, 3..10)) {
            let p: Vec<GapPoint> = gaps.iter().enumerate()
                .map(|(i, &g)| GapPoint { m: 1 << i, gap: g, std_error: 0.0 })
                .collect();
            for kind in [FitKind::Exponential, FitKind::Power] {
                let fit = fit_convergence(&p, kind).unwrap();
                prop_assert!((0.0..=1.0).contains(&fit.r_squared));
            }
        }
    }
}
