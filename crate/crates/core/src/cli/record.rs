//! Result records, CSV tables and the on-disk cache.
//!
//! Cache layout, one directory per config hash:
//!
//! ```text
//! <cache>/<hash>/config.txt    canonical config
//! <cache>/<hash>/record.json   ResultRecord
//! <cache>/<hash>/table.csv     record columns + `seconds`
//! ```
//!
//! Entries are staged in a temporary sibling directory and renamed into
//! place, so concurrent runs of one config leave a single complete entry.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "ASZL_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".aszl-cache";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value ≤ tolerance`; non-finite values fail and are
    /// stored as `f64::MAX` to keep the JSON numeric.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        let value = if value.is_finite() { value } else { f64::MAX };
        Check { name: name.into(), value, tolerance, passed: value <= tolerance }
    }
    /// Exact check: `failures` must be zero.
    pub fn exact(name: impl Into<String>, failures: usize) -> Self {
        Check { name: name.into(), value: failures as f64, tolerance: 0.0, passed: failures == 0 }
    }
}

/// Machine-readable result of one run. Serialization is deterministic: no
/// timestamps or timings (those live in the CSV only).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub tool_version: String,
    pub config_hash: String,
    pub kind: String,
    pub q: u32,
    pub family: String,
    /// `"exact"`, or `"estimate"` when any row used a subsample.
    pub exactness: String,
    pub seed: u64,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl ResultRecord {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::CorruptRecord(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::CorruptRecord(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| Error::CorruptRecord(format!("{}: {e}", path.display())))
    }

    /// CSV of the rows; `seconds` (one per row) is appended when given.
    pub fn to_csv(&self, seconds: Option<&[f64]>) -> String {
        let mut out = self.columns.join(",");
        if seconds.is_some() {
            out.push_str(",seconds");
        }
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            let mut cells: Vec<String> = row.iter().map(csv_cell).collect();
            if let Some(s) = seconds {
                cells.push(format!("{:.3}", s.get(i).copied().unwrap_or(0.0)));
            }
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `--cache-dir`, else `$ASZL_CACHE_DIR`, else `.aszl-cache`.
pub fn cache_root(explicit: Option<&Path>) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    match std::env::var_os(CACHE_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from(DEFAULT_CACHE_DIR),
    }
}

pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn new(root: PathBuf) -> Self {
        Cache { root }
    }

    pub fn entry(&self, hash: &str) -> PathBuf {
        self.root.join(hash)
    }

    /// The cached record, if present; a record whose hash disagrees with
    /// its directory is corrupt.
    pub fn lookup(&self, hash: &str) -> Result<Option<ResultRecord>> {
        let path = self.entry(hash).join("record.json");
        if !path.exists() {
            return Ok(None);
        }
        let rec = ResultRecord::read(&path)?;
        if rec.config_hash != hash {
            return Err(Error::CorruptRecord(format!("{}: hash mismatch", path.display())));
        }
        Ok(Some(rec))
    }

    /// Writes `files` into `<root>/<hash>` atomically; if another writer got
    /// there first its entry is kept.
    pub fn store(&self, hash: &str, files: &[(&str, &str)]) -> Result<PathBuf> {
        fs::create_dir_all(&self.root)?;
        let dest = self.entry(hash);
        let tmp = tempdir_in(&self.root, hash)?;
        write_files(&tmp, files)?;
        match fs::rename(&tmp, &dest) {
            Ok(()) => Ok(dest),
            Err(_) if dest.join("record.json").exists() => {
                let _ = fs::remove_dir_all(&tmp);
                Ok(dest)
            }
            Err(e) => {
                let _ = fs::remove_dir_all(&tmp);
                Err(e.into())
            }
        }
    }
}

fn tempdir_in(root: &Path, tag: &str) -> Result<PathBuf> {
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.subsec_nanos())
        .unwrap_or(0);
    for i in 0..1000u32 {
        let p = root.join(format!(".tmp-{tag}-{}-{nanos}-{i}", std::process::id()));
        match fs::create_dir(&p) {
            Ok(()) => return Ok(p),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(Error::Io(std::io::Error::other("could not create a staging directory")))
}

fn write_files(dir: &Path, files: &[(&str, &str)]) -> Result<()> {
    for (name, body) in files {
        fs::write(dir.join(name), body)?;
    }
    Ok(())
}

/// Copies files into `dir` via staged names and renames, so no reader sees
/// a truncated file.
pub fn publish(dir: &Path, files: &[(&str, &str)]) -> Result<()> {
    fs::create_dir_all(dir)?;
    for (name, body) in files {
        let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
        fs::write(&tmp, body)?;
        fs::rename(&tmp, dir.join(name))?;
    }
    Ok(())
}
