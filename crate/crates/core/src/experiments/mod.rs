//! Batch experiments and their CSV output.
//!
//! Every experiment row owns a row index; trial `t` of row `i` runs from
//! `trial_seed(seed, i, t)`, so any single trial can be rerun in isolation
//! and the output does not depend on scheduling.

mod config;
mod suite;
mod sweep;
mod tables;

use std::io::Write;

use crate::error::Result;
use crate::stats;

pub use config::{ExperimentConfig, Fix, RadiusKind, SchemeChoice, DEFAULT_N, FULL_N};
pub use suite::{
    run_routing_power_suite, run_routing_trials, run_scenario, RoutingRecord, Scenario,
    ScenarioRun, SuiteParams,
};
pub use sweep::{component_trial, run_cn_sweep, run_component_sweep, RowParams};
pub use tables::{reproduce_tables, write_tables, TableEntry};

/// One metric of one configuration, aggregated over its trials.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub scheme: String,
    pub radius_kind: String,
    pub cn: String,
    pub n: usize,
    pub delta: f64,
    pub slots: usize,
    pub awake: usize,
    pub radius: f64,
    pub metric: String,
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub std: f64,
    pub values: Vec<f64>,
}

impl ResultRow {
    pub const HEADER: [&'static str; 13] = [
        "experiment",
        "scheme",
        "radius_kind",
        "cn",
        "n",
        "delta",
        "L",
        "d",
        "radius",
        "metric",
        "mean",
        "std",
        "values",
    ];

    /// Copies the configuration columns of `self` onto a new metric.
    pub fn with_metric(&self, metric: &str, values: Vec<f64>) -> ResultRow {
        ResultRow {
            metric: metric.to_string(),
            mean: stats::mean(&values),
            std: stats::sample_std(&values),
            values,
            ..self.clone()
        }
    }

    fn record(&self) -> Vec<String> {
        let values: Vec<String> = self.values.iter().map(f64::to_string).collect();
        vec![
            self.experiment.clone(),
            self.scheme.clone(),
            self.radius_kind.clone(),
            self.cn.clone(),
            self.n.to_string(),
            self.delta.to_string(),
            self.slots.to_string(),
            self.awake.to_string(),
            self.radius.to_string(),
            self.metric.clone(),
            self.mean.to_string(),
            self.std.to_string(),
            values.join(";"),
        ]
    }
}

/// Writes rows as CSV; the header is written even when `rows` is empty.
pub fn write_rows<W: Write>(w: W, rows: &[ResultRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(ResultRow::HEADER)?;
    for row in rows {
        out.write_record(row.record())?;
    }
    out.flush().map_err(|e| crate::Error::Csv(e.into()))?;
    Ok(())
}
