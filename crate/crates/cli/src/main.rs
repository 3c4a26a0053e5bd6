use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use cheblab::experiments::{self, ExperimentConfig, Outcome};
use cheblab::Error;
use clap::{Parser, Subcommand};
use serde_json::json;

const EXIT_ASSERTION: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "cheblab", version, about = "Chebyshev polynomial experiments on planar sets")]
struct Cli {
    /// Worker threads; overrides CHEBLAB_THREADS.
    #[arg(long, global = true, env = "CHEBLAB_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Overrides `seed` from the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List registered experiments.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    }
    match cli.command {
        Command::List => {
            for e in experiments::registry() {
                println!("{:<22} {}", e.name, e.description);
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            config,
            output_dir,
            seed,
        } => run(&config, output_dir, seed, cli.threads),
    }
}

fn load(path: &Path, output_dir: Option<PathBuf>, seed: Option<u64>) -> Result<ExperimentConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut cfg = ExperimentConfig::from_json(&text).map_err(|e| e.to_string())?;
    if let Some(d) = output_dir {
        cfg.output_dir = d;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn run(path: &Path, output_dir: Option<PathBuf>, seed: Option<u64>, threads: Option<usize>) -> ExitCode {
    let cfg = match load(path, output_dir, seed) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    let outcome = match experiments::run(&cfg) {
        Ok(o) => o,
        Err(Error::Config(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e) => {
            eprintln!("error: {} failed: {e}", cfg.experiment);
            return ExitCode::from(EXIT_INTERNAL);
        }
    };
    let wall = clock.elapsed().as_secs_f64();
    if let Err(e) = write_outputs(&cfg, &outcome, started, wall, threads) {
        eprintln!("error: writing outputs: {e}");
        return ExitCode::from(EXIT_INTERNAL);
    }
    for c in &outcome.checks {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!(
        "{}: {} checks, {} files in {} ({wall:.1} s)",
        cfg.experiment,
        outcome.checks.len(),
        outcome.artifacts.len() + 1,
        cfg.output_dir.display()
    );
    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_ASSERTION)
    }
}

/// Artifacts first, then the manifest, all from this thread.
fn write_outputs(
    cfg: &ExperimentConfig,
    outcome: &Outcome,
    started: u64,
    wall: f64,
    threads: Option<usize>,
) -> std::io::Result<()> {
    std::fs::create_dir_all(&cfg.output_dir)?;
    for a in &outcome.artifacts {
        std::fs::write(cfg.output_dir.join(&a.name), &a.bytes)?;
    }
    let manifest = json!({
        "experiment": cfg.experiment,
        "config": cfg,
        "versions": {
            "cheblab": cheblab::VERSION,
            "cheblab-cli": env!("CARGO_PKG_VERSION"),
        },
        "seed": cfg.seed,
        "threads": threads.unwrap_or_else(rayon::current_num_threads),
        "started_unix": started,
        "wall_time_s": wall,
        "passed": outcome.passed(),
        "checks": outcome.checks,
        "cells": outcome.cells.iter().map(|(k, v)| json!({"cell": k, "status": v})).collect::<Vec<_>>(),
        "files": outcome.artifacts.iter().map(|a| json!({"name": a.name, "bytes": a.bytes.len()})).collect::<Vec<_>>(),
    });
    let mut text = serde_json::to_string_pretty(&manifest).map_err(std::io::Error::other)?;
    text.push('\n');
    std::fs::write(cfg.output_dir.join("manifest.json"), text)
}
