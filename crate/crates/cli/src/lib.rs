//! Command-line front end for the `qinfo` protocol laboratory.
//!
//! Exit status: 0 on success, 2 for a bad configuration, 3 when a protocol
//! invariant is violated (the report is still written), 1 for anything else.

pub mod config;
pub mod experiment;
pub mod report;

use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};

use anyhow::{Context, Result};

pub use config::{Cli, Command, ExperimentConfig, Flags, Format};
pub use experiment::{run_experiment, Report, TrialRecord};
pub use report::{summarize, MetricSummary};

/// A configuration problem; maps to exit status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl ConfigError {
    pub fn msg(m: impl Into<String>) -> anyhow::Error {
        anyhow::Error::new(ConfigError(m.into()))
    }

    pub fn wrap(e: anyhow::Error) -> anyhow::Error {
        ConfigError::msg(format!("{e:#}"))
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_INVARIANT: u8 = 3;

/// Exit status for an error returned by [`execute`].
pub fn exit_code_for(err: &anyhow::Error) -> u8 {
    if err.chain().any(|c| c.is::<ConfigError>())
        || err.chain().any(|c| {
            c.downcast_ref::<qinfo::QinfoError>()
                .is_some_and(|q| matches!(q, qinfo::QinfoError::InvalidConfig(_)))
        })
    {
        EXIT_CONFIG
    } else {
        EXIT_FAILURE
    }
}

/// Runs the configured experiment and writes the report and any
/// transcripts. Returns the exit status.
pub fn execute(cfg: &ExperimentConfig) -> Result<u8> {
    let report = run_experiment(cfg)?;
    if let Some(dir) = &cfg.transcripts {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for t in &report.trials {
            if let Some(tr) = &t.transcript {
                let path = dir.join(format!("{}-trial-{}.jsonl", report.command, t.trial));
                fs::write(&path, tr.to_json_lines())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
    }
    match &cfg.output {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            write_report(&report, cfg.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_report(&report, cfg.format, &mut lock)?;
        }
    }
    if report.violations.is_empty() {
        Ok(EXIT_OK)
    } else {
        for v in &report.violations {
            eprintln!("invariant violated: {v}");
        }
        Ok(EXIT_INVARIANT)
    }
}

fn write_report(report: &Report, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => report::write_json(report, out),
        Format::Csv => report::write_csv(report, out),
    }
}
