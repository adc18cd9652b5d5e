//! Runs bloch-core experiments from a JSON config and renders the results
//! as JSON or CSV.

pub mod commands;
pub mod config;
pub mod error;

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub use commands::{Cell, Table};
pub use config::{
    parse_assignment, parse_config, parse_config_str, CommandKind, ExperimentConfig, OutputFormat, Overrides,
};
pub use error::{CliError, Result};

pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");

/// What a successful run writes out. Only `wall_time` varies between
/// runs with the same config.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub config: ExperimentConfig,
    pub results: Value,
    pub wall_time: f64,
    pub library_version: &'static str,
}

pub struct Execution {
    pub record: RunRecord,
    pub table: Table,
}

pub fn execute(cfg: ExperimentConfig) -> Result<Execution> {
    let start = Instant::now();
    let out = commands::run(&cfg)?;
    let record = RunRecord {
        config: cfg,
        results: out.results,
        wall_time: start.elapsed().as_secs_f64(),
        library_version: LIBRARY_VERSION,
    };
    Ok(Execution { record, table: out.table })
}

fn number(x: f64) -> String {
    // shortest representation that parses back to the same f64
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

pub fn render_csv(table: &Table) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let out = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(&table.columns).map_err(out)?;
    for row in &table.rows {
        let fields = row.iter().map(|c| match c {
            Cell::Num(x) => number(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        });
        w.write_record(fields).map_err(out)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

pub fn render(exec: &Execution) -> Result<String> {
    match exec.record.config.output_format {
        OutputFormat::Json => {
            serde_json::to_string_pretty(&exec.record).map(|s| s + "\n").map_err(|e| CliError::Output(e.to_string()))
        }
        OutputFormat::Csv => render_csv(&exec.table),
    }
}

/// Executes, renders and writes to the configured path (or returns the
/// text for stdout when no path is set).
pub fn run(cfg: ExperimentConfig) -> Result<Option<String>> {
    let path = cfg.output_path.clone();
    let text = render(&execute(cfg)?)?;
    match path {
        Some(p) => {
            std::fs::write(&p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
