//! `pursuit`: batch runner for greedy sparse approximation experiments.
//!
//! Exit status: 0 on success, 1 on usage/config/data errors, 2 when the run
//! completed but a hypothesis was violated or a check failed.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use pursuit::Dictionary;

use crate::config::{DictionarySource, ExperimentConfig};

#[derive(Debug, Parser)]
#[command(
    name = "pursuit",
    version,
    about = "Greedy sparse approximation experiments"
)]
struct Cli {
    /// JSON experiment config; relative paths inside it resolve against its directory.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding the config's `output_dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Replaces every seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print cumulative and mutual coherence of a dictionary.
    Coherence {
        /// Dictionary text file (instead of the config's dictionary).
        #[arg(long, conflicts_with = "orthonormal")]
        dictionary: Option<PathBuf>,
        /// Use the standard basis of R^N.
        #[arg(long)]
        orthonormal: Option<usize>,
    },
    /// Run PGA/OGA and the configured checks, writing traces and reports.
    Run,
    /// Compare the best m-term approximation with both greedy algorithms.
    Oracle {
        #[arg(long)]
        m: usize,
    },
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let Some(path) = &cli.config else {
        bail!("--config is required");
    };
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.override_seed(seed);
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Coherence {
            dictionary,
            orthonormal,
        } => {
            let dict: Dictionary = match (dictionary, orthonormal) {
                (Some(path), _) => DictionarySource::File { path: path.clone() }.build()?,
                (None, Some(dim)) => Dictionary::orthonormal(*dim)?,
                (None, None) => load_config(cli)?.dictionary.build()?,
            };
            commands::cmd_coherence(&dict, cli.quiet)
        }
        Command::Run => commands::cmd_run(&load_config(cli)?, cli.quiet),
        Command::Oracle { m } => commands::cmd_oracle(&load_config(cli)?, *m, cli.quiet),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
