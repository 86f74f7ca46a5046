use std::collections::BTreeMap;
use std::io::Write;

use anyhow::{bail, Result};
use serde::Serialize;

use crate::experiment::{Report, TrialRecord};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSummary {
    pub metric: String,
    /// Trials that reported this metric.
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation; zero for a single trial.
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
}

/// Per-metric mean, standard deviation, min and max, in metric-name order.
pub fn summarize(trials: &[TrialRecord]) -> Result<Vec<MetricSummary>> {
    if trials.is_empty() {
        bail!("cannot summarize an empty batch");
    }
    let mut columns: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for t in trials {
        for (name, &v) in &t.metrics {
            columns.entry(name).or_default().push(v);
        }
    }
    Ok(columns
        .into_iter()
        .map(|(name, values)| {
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let stddev = if values.len() > 1 {
                (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            MetricSummary {
                metric: name.to_string(),
                count: values.len(),
                mean,
                stddev,
                min: values.iter().copied().fold(f64::INFINITY, f64::min),
                max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect())
}

pub fn write_json(report: &Report, out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, report)?;
    writeln!(out)?;
    Ok(())
}

/// One row per trial: `trial, seed`, then every metric in name order. A
/// metric a trial did not report is left empty.
pub fn write_csv(report: &Report, out: &mut dyn Write) -> Result<()> {
    let names: Vec<&str> = report.summary.iter().map(|s| s.metric.as_str()).collect();
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["trial", "seed"];
    header.extend(&names);
    w.write_record(&header)?;
    for t in &report.trials {
        let mut row = vec![t.trial.to_string(), t.seed.to_string()];
        row.extend(
            names
                .iter()
                .map(|n| t.metrics.get(*n).map_or(String::new(), |v| v.to_string())),
        );
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
