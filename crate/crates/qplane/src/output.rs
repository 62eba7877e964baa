//! Writers for JSON, JSONL and CSV. Everything is rendered to a string first
//! so that a run either writes a complete file or nothing.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Jsonl,
    Csv,
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Failed(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn to_jsonl<T: Serialize>(rows: &[T]) -> CliResult<String> {
    let mut s = String::new();
    for row in rows {
        s.push_str(
            &serde_json::to_string(row)
                .map_err(|e| CliError::Failed(format!("serialization failed: {e}")))?,
        );
        s.push('\n');
    }
    Ok(s)
}

pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Failed(format!("csv: {e}"));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(row).map_err(fail)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Failed(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Failed(format!("csv: {e}")))
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            fs::write(p, text).map_err(|e| CliError::io(p, e))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}
