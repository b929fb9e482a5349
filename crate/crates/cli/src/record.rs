//! Run records (JSON) and sample tables (CSV).

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use taperbeam::{BeamConfig, Method};

use crate::config::SolverOptions;
use crate::error::CliResult;
use crate::runner::Outcome;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "W_tilde")]
    pub w_tilde: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub tool_version: String,
    /// Seconds since the Unix epoch at which the record was made.
    pub created_unix: u64,
    pub seed: u64,
    pub config: BeamConfig,
    pub method: Method,
    pub settings: SolverOptions,
    pub samples: Vec<Sample>,
    pub final_loss: Option<f64>,
    pub wall_time_s: f64,
    pub loss_trace: Vec<f64>,
    pub line_search_failed: bool,
}

impl RunRecord {
    pub fn new(config: BeamConfig, settings: &SolverOptions, outcome: &Outcome) -> Self {
        Self {
            tool_version: TOOL_VERSION.to_string(),
            created_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            seed: settings.seed,
            config,
            method: outcome.method,
            settings: settings.clone(),
            samples: outcome
                .samples
                .iter()
                .map(|&(x, w_tilde)| Sample { x, w_tilde })
                .collect(),
            final_loss: outcome.loss,
            wall_time_s: outcome.wall_time,
            loss_trace: outcome.loss_trace.clone(),
            line_search_failed: outcome.line_search_failed,
        }
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// One CSV line: `param_name,param_value,X,W_tilde,method,loss,wall_time_s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub param_name: String,
    pub param_value: String,
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "W_tilde")]
    pub w_tilde: f64,
    pub method: String,
    pub loss: Option<f64>,
    pub wall_time_s: Option<f64>,
}

impl CsvRow {
    /// Rows for every sample of `outcome`. `timing` controls whether the
    /// wall time is written; leaving it out makes the file reproducible
    /// byte for byte.
    pub fn from_outcome(param_name: &str, param_value: &str, outcome: &Outcome, timing: bool) -> Vec<CsvRow> {
        outcome
            .samples
            .iter()
            .map(|&(x, w_tilde)| CsvRow {
                param_name: param_name.to_string(),
                param_value: param_value.to_string(),
                x,
                w_tilde,
                method: outcome.method.label().to_string(),
                loss: outcome.loss,
                wall_time_s: timing.then_some(outcome.wall_time),
            })
            .collect()
    }
}

pub fn csv_string(rows: &[CsvRow]) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record([
        "param_name",
        "param_value",
        "X",
        "W_tilde",
        "method",
        "loss",
        "wall_time_s",
    ])?;
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_csv(path: &Path, rows: &[CsvRow]) -> CliResult<()> {
    std::fs::write(path, csv_string(rows)?)?;
    Ok(())
}

pub fn read_csv(path: &Path) -> CliResult<Vec<CsvRow>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}
