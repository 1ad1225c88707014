use std::path::{Path, PathBuf};

use super::config::{family_name, ExperimentConfig, TOOL_VERSION};
use super::record::{publish, Cache, ResultRecord};
use super::suites::execute;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub record: ResultRecord,
    /// Served from the cache without recomputation.
    pub cached: bool,
    /// The cache entry directory.
    pub entry: PathBuf,
}

/// Runs `cfg`, or replays the cached record for its hash. Records whose
/// checks fail are not cached and surface as [`Error::Certification`].
pub fn run(cfg: &ExperimentConfig, cache_root: &Path) -> Result<RunOutcome> {
    cfg.validate()?;
    let cache = Cache::new(cache_root.to_path_buf());
    let hash = cfg.hash();
    let entry = cache.entry(&hash);
    if let Some(record) = cache.lookup(&hash)? {
        if let Some(out) = &cfg.output {
            let csv = std::fs::read_to_string(entry.join("table.csv")).unwrap_or_else(|_| record.to_csv(None));
            publish(out, &[("record.json", &record.to_json()), ("table.csv", &csv)])?;
        }
        return Ok(RunOutcome { record, cached: true, entry });
    }

    let table = match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(|| execute(cfg))?,
        None => execute(cfg)?,
    };
    let passed = table.checks.iter().all(|c| c.passed);
    let record = ResultRecord {
        tool_version: TOOL_VERSION.into(),
        config_hash: hash.clone(),
        kind: cfg.kind.to_string(),
        q: cfg.q,
        family: family_name(cfg.family).into(),
        exactness: if table.estimate { "estimate" } else { "exact" }.into(),
        seed: cfg.seed,
        columns: table.columns.clone(),
        rows: table.rows.clone(),
        checks: table.checks.clone(),
        passed,
    };
    if !passed {
        let failed: Vec<String> = record
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} = {:e} (tolerance {:e})", c.name, c.value, c.tolerance))
            .collect();
        return Err(Error::Certification(failed.join("; ")));
    }
    let json = record.to_json();
    let csv = record.to_csv(Some(&table.seconds));
    let config = cfg.canonical();
    let files = [("config.txt", config.as_str()), ("record.json", json.as_str()), ("table.csv", csv.as_str())];
    let entry = cache.store(&hash, &files)?;
    if let Some(out) = &cfg.output {
        publish(out, &files[1..])?;
    }
    Ok(RunOutcome { record, cached: false, entry })
}
