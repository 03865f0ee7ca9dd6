//! Report files. Every file is written in one piece by a single writer,
//! after all jobs feeding it have finished.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use hpol_core::entropy::GrowthTable;
use serde::Serialize;

/// A growth table tagged with the run it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct TaggedTable {
    pub system: String,
    pub target: String,
    pub table: GrowthTable,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut text = String::new();
    for r in rows {
        text.push_str(&serde_json::to_string(r)?);
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// `system,target,eps,n,sep_count,span_count`, one row per table cell.
pub fn write_growth_csv(path: &Path, tables: &[TaggedTable]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(["system", "target", "eps", "n", "sep_count", "span_count"])?;
    for t in tables {
        for (eps, n, sep, span) in t.table.cells() {
            w.write_record([
                t.system.as_str(),
                t.target.as_str(),
                &eps.to_string(),
                &n.to_string(),
                &sep.to_string(),
                &span.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Whitespace-separated `n eps count` columns (separated counts), with a
/// blank line between scales.
pub fn write_plot(path: &Path, table: &GrowthTable) -> Result<()> {
    let mut text = String::from("# n eps count\n");
    for (e, &eps) in table.eps.iter().enumerate() {
        if e > 0 {
            text.push('\n');
        }
        for (i, &n) in table.n.iter().enumerate() {
            text.push_str(&format!("{n} {eps} {}\n", table.sep[e][i]));
        }
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
