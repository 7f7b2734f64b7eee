//! Result emission with a fixed column schema, in CSV or JSON lines.
//! Formatting is fully deterministic: identical rows give identical bytes.

use super::ResultRow;
use crate::error::Result;
use std::fmt::Write as _;
use std::path::Path;

pub const CSV_HEADER: &str =
    "experiment,n,r,s,t,eps,replicas,tail_hat,wilson_hi,bound,bound_ok,disc_err,seed,runtime_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

pub fn to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            row.experiment,
            row.n,
            opt(&row.r),
            opt(&row.s),
            opt(&row.t),
            opt(&row.eps),
            row.replicas,
            row.tail_hat,
            row.wilson_hi,
            row.bound,
            row.bound_ok,
            opt(&row.disc_err),
            row.seed,
            row.runtime_ms,
        )
        .unwrap();
    }
    out
}

pub fn to_json_lines(rows: &[ResultRow]) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row).expect("row serialization"));
        out.push('\n');
    }
    out
}

pub fn render(rows: &[ResultRow], format: Format) -> String {
    match format {
        Format::Csv => to_csv(rows),
        Format::Json => to_json_lines(rows),
    }
}

pub fn write_file(rows: &[ResultRow], path: &Path, format: Format) -> Result<()> {
    std::fs::write(path, render(rows, format))?;
    Ok(())
}

/// True when every row's bound check passed; drives the process exit code.
pub fn all_bounds_ok(rows: &[ResultRow]) -> bool {
    rows.iter().all(|r| r.bound_ok)
}
