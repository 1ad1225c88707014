use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use aszl::cli::verify::{require_all, verify, Level};
use aszl::cli::{cache_root, exit_code, report, run, ExperimentConfig};
use aszl::{Error, Result};

/// Artin-Schreier L-function zero statistics.
#[derive(Parser)]
#[command(name = "aszl", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Cache directory (default: $ASZL_CACHE_DIR, else .aszl-cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Override the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config (served from the cache when unchanged).
    Run { config: PathBuf },
    /// Summarize a record file or a directory of records.
    Report {
        path: PathBuf,
        /// Emit plot-ready CSV of density rows instead of tables.
        #[arg(long)]
        csv: bool,
    },
    /// Run the built-in verification battery.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        level: Level,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(Error::Config("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    match cli.command {
        Command::Run { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| Error::Config(format!("{}: {e}", config.display())))?;
            let mut cfg = ExperimentConfig::parse(&text)?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            if cli.workers.is_some() {
                cfg.workers = cli.workers;
            }
            let root = cache_root(cli.cache_dir.as_deref());
            let out = run(&cfg, &root)?;
            println!(
                "{} {} ({}, {}) -> {}",
                out.record.kind,
                out.record.config_hash,
                out.record.exactness,
                if out.cached { "cached" } else { "computed" },
                out.entry.display()
            );
            print!("{}", report::summarize(std::slice::from_ref(&out.record)));
        }
        Command::Report { path, csv } => {
            let recs = report::collect(&path)?;
            if csv {
                print!("{}", report::density_csv(&recs));
            } else {
                print!("{}", report::summarize(&recs));
            }
        }
        Command::Verify { level } => {
            let checks = verify(level)?;
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                println!("{tag} {} (value {:e}, tolerance {:e})", c.name, c.value, c.tolerance);
            }
            require_all(&checks)?;
        }
    }
    Ok(())
}
