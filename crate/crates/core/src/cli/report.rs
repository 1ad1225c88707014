//! Summaries of stored records.
//!
//! Records are grouped by `(q, family)`, groups in ascending order, and
//! within a group by experiment kind and config hash. `--csv` emits the
//! density rows of every record with `q`, `family` and `kind` prepended.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::record::{csv_cell, ResultRecord};
use crate::error::{Error, Result};

fn record_files(dir: &Path, depth: usize, out: &mut Vec<PathBuf>) -> Result<()> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)?.map(|e| e.map(|e| e.path())).collect::<std::io::Result<_>>()?;
    entries.sort();
    for p in entries {
        let hidden = p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with('.'));
        if hidden {
            continue;
        }
        if p.is_dir() && depth > 0 {
            record_files(&p, depth - 1, out)?;
        } else if p.extension().is_some_and(|e| e == "json") {
            out.push(p);
        }
    }
    Ok(())
}

/// A record file, or every `*.json` in a directory and its subdirectories
/// (two levels, so a cache root works). Hidden entries are skipped.
pub fn collect(path: &Path) -> Result<Vec<ResultRecord>> {
    if !path.exists() {
        return Err(Error::CorruptRecord(format!("{}: no such file or directory", path.display())));
    }
    if path.is_file() {
        return Ok(vec![ResultRecord::read(path)?]);
    }
    let mut files = Vec::new();
    record_files(path, 2, &mut files)?;
    files.iter().map(|f| ResultRecord::read(f)).collect()
}

fn groups(records: &[ResultRecord]) -> BTreeMap<(u32, String), Vec<&ResultRecord>> {
    let mut g: BTreeMap<(u32, String), Vec<&ResultRecord>> = BTreeMap::new();
    for r in records {
        g.entry((r.q, r.family.clone())).or_default().push(r);
    }
    for v in g.values_mut() {
        v.sort_by(|a, b| (&a.kind, &a.config_hash).cmp(&(&b.kind, &b.config_hash)));
    }
    g
}

fn cell(v: &serde_json::Value) -> String {
    match v.as_f64() {
        Some(x) if !v.is_i64() && !v.is_u64() => format!("{x:.6e}"),
        _ => csv_cell(v),
    }
}

/// Human-readable tables, one per record, grouped by `(q, family)`.
pub fn summarize(records: &[ResultRecord]) -> String {
    if records.is_empty() {
        return "no records\n".into();
    }
    let mut out = String::new();
    for ((q, family), recs) in groups(records) {
        let _ = writeln!(out, "== q = {q}, family = {family} ==");
        for r in recs {
            let status = if r.passed { "passed" } else { "FAILED" };
            let _ = writeln!(out, "-- {} [{}] {} {status}", r.kind, &r.config_hash[..r.config_hash.len().min(12)], r.exactness);
            let body: Vec<Vec<String>> = r.rows.iter().map(|row| row.iter().map(cell).collect()).collect();
            let widths: Vec<usize> = (0..r.columns.len())
                .map(|j| body.iter().map(|row| row.get(j).map_or(0, |c| c.len())).chain([r.columns[j].len()]).max().unwrap())
                .collect();
            let line = |cells: &[String]| {
                cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
            };
            let _ = writeln!(out, "{}", line(&r.columns));
            for row in &body {
                let _ = writeln!(out, "{}", line(row));
            }
        }
        out.push('\n');
    }
    out
}

/// Plot-ready CSV of the density rows.
pub fn density_csv(records: &[ResultRecord]) -> String {
    let cols = ["d", "family_size", "mean_W", "rmt_ref", "abs_diff", "max_rh_residual"];
    let mut out = format!("q,family,kind,{}\n", cols.join(","));
    for recs in groups(records).values() {
        for r in recs.iter().filter(|r| r.kind.starts_with("density")) {
            let idx: Vec<Option<usize>> = cols.iter().map(|c| r.columns.iter().position(|x| x == c)).collect();
            for row in &r.rows {
                let cells: Vec<String> =
                    idx.iter().map(|i| i.and_then(|i| row.get(i)).map(csv_cell).unwrap_or_default()).collect();
                let _ = writeln!(out, "{},{},{},{}", r.q, r.family, r.kind, cells.join(","));
            }
        }
    }
    out
}
