//! Pricing sweeps over the number of monitoring dates and their CSV/JSON
//! output.
//!
//! CSV output is long format, one row per `(table, m, estimator)`:
//!
//! ```text
//! table,m,estimator,mean,std_error,n_paths
//! table2,1,q_upper,3.0127,0.0101,400000
//! ```
//!
//! Estimators are `vanilla`, `q_s`, `q_upper`, `q_indep`, `q_lower`,
//! `q_exact` (when available), `gap`, `q0`, `q1` and `q2`. For the point
//! estimators `q0..q2` the `std_error` column holds the half-width.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{price, PointEstimate, PricingReport, RunConfig};
use crate::harness::config::ConfigFile;
use crate::stats::EstimatorResult;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Value of the `table` column.
    pub label: String,
    pub m_values: Vec<usize>,
    pub run: RunConfig,
}

impl SweepSpec {
    /// Sweep with the config's own defaults for the `m` list, path count and
    /// seed, falling back to the library defaults.
    pub fn from_config(config: &ConfigFile) -> Self {
        let mut run = RunConfig::default();
        if let Some(paths) = config.paths {
            run.paths = paths;
        }
        if let Some(seed) = config.seed {
            run.seed = seed;
        }
        Self {
            label: config.label(),
            m_values: config.m.clone().unwrap_or_else(|| vec![1, 2, 4, 8, 16, 32, 64]),
            run,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.m_values.is_empty() || self.m_values[0] == 0 {
            return Err(Error::Config("m values must be at least 1".into()));
        }
        if self.m_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!(
                "m values must be strictly increasing, got {:?}",
                self.m_values
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub m: usize,
    pub report: PricingReport,
}

/// Prices `config` once per entry of `spec.m_values` on a uniform grid,
/// handing each row to `on_row` as soon as it is done.
pub fn run_sweep(
    config: &ConfigFile,
    spec: &SweepSpec,
    mut on_row: impl FnMut(&SweepRow) -> Result<()>,
) -> Result<Vec<SweepRow>> {
    spec.check()?;
    let mut rows = Vec::with_capacity(spec.m_values.len());
    for &m in &spec.m_values {
        let problem = config.validated_with_steps(m)?;
        let row = SweepRow {
            m,
            report: price(&problem, &spec.run)?,
        };
        on_row(&row)?;
        rows.push(row);
    }
    Ok(rows)
}

/// One line of the long-format CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub table: String,
    pub m: usize,
    pub estimator: String,
    pub mean: f64,
    pub std_error: f64,
    pub n_paths: u64,
}

/// Flattens one sweep row into CSV records.
pub fn records(label: &str, row: &SweepRow) -> Vec<Record> {
    let r = &row.report;
    let mut out = Vec::with_capacity(10);
    let mut push = |name: &str, mean: f64, std_error: f64| {
        out.push(Record {
            table: label.to_string(),
            m: row.m,
            estimator: name.to_string(),
            mean,
            std_error,
            n_paths: r.n_paths,
        })
    };
    let mut est = |name: &str, e: &EstimatorResult| push(name, e.mean, e.std_error);
    est("vanilla", &r.vanilla);
    est("q_s", &r.q_s);
    est("q_upper", &r.q_upper);
    est("q_indep", &r.q_indep);
    est("q_lower", &r.q_lower);
    if let Some(e) = &r.q_exact {
        est("q_exact", e);
    }
    est("gap", &r.gap);
    let mut point = |name: &str, p: &PointEstimate| push(name, p.value, p.std_error);
    point("q0", &r.q0);
    point("q1", &r.q1);
    point("q2", &r.q2);
    out
}

/// Incremental CSV writer for sweep rows.
pub struct CsvSink<W: Write> {
    writer: csv::Writer<W>,
}

impl<W: Write> CsvSink<W> {
    pub fn new(inner: W) -> Self {
        Self {
            writer: csv::Writer::from_writer(inner),
        }
    }

    pub fn write(&mut self, label: &str, row: &SweepRow) -> Result<()> {
        for rec in records(label, row) {
            self.writer.serialize(rec)?;
        }
        self.writer.flush().map_err(|e| Error::Csv(e.into()))
    }

    pub fn into_inner(self) -> Result<W> {
        self.writer
            .into_inner()
            .map_err(|e| Error::Config(format!("flushing CSV output: {e}")))
    }
}

pub fn read_records(input: impl Read) -> Result<Vec<Record>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

pub fn to_json(rows: &[SweepRow]) -> Result<String> {
    Ok(serde_json::to_string_pretty(rows)?)
}

pub fn from_json(text: &str) -> Result<Vec<SweepRow>> {
    Ok(serde_json::from_str(text)?)
}
