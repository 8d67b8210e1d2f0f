//! Measured job runtimes in CSV form.
//!
//! ```text
//! backend,M,S,K,deff,T_seconds
//! ibm_hanoi,100,100,1,6,68.0
//! ```

use std::path::Path;

use qkrt_core::JobSpec;
use serde::Deserialize;

use crate::error::{CliError, Result};

pub const HEADER: [&str; 6] = ["backend", "M", "S", "K", "deff", "T_seconds"];

#[derive(Debug, Deserialize)]
struct Row {
    backend: String,
    #[serde(rename = "M")]
    m: u64,
    #[serde(rename = "S")]
    s: u64,
    #[serde(rename = "K")]
    k: u64,
    deff: f64,
    #[serde(rename = "T_seconds")]
    t_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuntimeRecord {
    pub backend: String,
    pub job: JobSpec,
    pub t_seconds: f64,
}

fn malformed(path: &Path, line: u64, message: impl Into<String>) -> CliError {
    CliError::MalformedCsv {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Line number (1-based, header is line 1) of a csv position.
fn line_of(pos: Option<&csv::Position>) -> u64 {
    pos.map(|p| p.line()).unwrap_or(0)
}

/// Parse records from CSV text. `path` is only used in messages.
pub fn parse_runtime_records(text: &str, path: &Path) -> Result<Vec<RuntimeRecord>> {
    if text.trim().is_empty() {
        log::warn!("{}: empty file, no records", path.display());
        return Ok(Vec::new());
    }
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| malformed(path, 1, e.to_string()))?.clone();
    for col in HEADER {
        if !headers.iter().any(|h| h == col) {
            return Err(malformed(path, 1, format!("missing column `{col}`")));
        }
    }
    let mut out = Vec::new();
    for result in rdr.deserialize::<Row>() {
        let row = result.map_err(|e| {
            let line = line_of(e.position());
            malformed(path, line, e.to_string())
        })?;
        let line = out.len() as u64 + 2;
        if !(row.t_seconds > 0.0 && row.t_seconds.is_finite()) {
            return Err(malformed(
                path,
                line,
                format!("T_seconds must be positive, got {}", row.t_seconds),
            ));
        }
        let job =
            JobSpec::with_updates(row.m, row.s, row.k, row.deff).map_err(|e| malformed(path, line, e.to_string()))?;
        out.push(RuntimeRecord {
            backend: row.backend,
            job,
            t_seconds: row.t_seconds,
        });
    }
    if out.is_empty() {
        log::warn!("{}: header only, no records", path.display());
    }
    Ok(out)
}

pub fn load_runtime_records(path: &Path) -> Result<Vec<RuntimeRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_runtime_records(&text, path)
}
