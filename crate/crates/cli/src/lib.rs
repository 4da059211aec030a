//! Command-line front end for `boxdim`: configuration, task dispatch, report
//! files and cache maintenance.
//!
//! Exit codes: 0 success, 1 I/O, 2 configuration or input, 3 resource cap,
//! 4 verification failure.

pub mod config;
pub mod output;
pub mod tasks;
pub mod witness;

use std::path::PathBuf;

use boxdim::ErrorKind;
use clap::{Parser, Subcommand};

pub use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] boxdim::Error),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("output error: {0}")]
    Output(String),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Resource => 3,
                ErrorKind::Verification => 4,
                ErrorKind::Io => 1,
            },
            CliError::Verification(_) => 4,
            CliError::Io(_) | CliError::Output(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "boxdim", version, about = "Covers and dimension profiles of box spaces")]
pub struct Cli {
    /// Worker threads; all outputs are identical for every value.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Graph cache directory.
    #[arg(long, global = true, env = "BOXDIM_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Recorded in the summary; every algorithm is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Write zero wall times so that reruns are byte-identical.
    #[arg(long, global = true)]
    pub no_timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the single task of a configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Write verifiable witnesses here.
        #[arg(long)]
        export_witness: Option<PathBuf>,
    },
    /// Cover utilities.
    Cover {
        #[command(subcommand)]
        action: CoverCommand,
    },
    /// Cache utilities.
    Cache {
        #[command(subcommand)]
        action: CacheCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum CoverCommand {
    /// Re-verify an exported witness file against the space of a configuration.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheCommand {
    /// Evict least recently used entries beyond a byte budget.
    Gc {
        #[arg(long)]
        budget: u64,
    },
}

/// Execute a parsed command line. Thread-pool setup is left to the caller.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Run { config, export_witness } => {
            let cfg = RunConfig::load(config)?;
            let ctx = tasks::Context {
                cache_dir: cli.cache_dir.clone().or_else(|| cfg.output.cache_dir.clone()),
                timing: !cli.no_timing,
                seed: cli.seed,
            };
            let artifacts = tasks::run(&cfg, &ctx)?;
            output::write(&cfg, &artifacts, export_witness.as_deref())?;
            match artifacts.failure {
                Some(msg) => Err(CliError::Verification(msg)),
                None => Ok(()),
            }
        }
        Command::Cover {
            action: CoverCommand::Verify { config, witness },
        } => {
            let cfg = RunConfig::load(config)?;
            let reports = witness::verify_file(&cfg, witness, cli.cache_dir.as_deref())?;
            println!("{}", serde_json::to_string_pretty(&reports)?);
            match reports.iter().position(|r| !r.is_valid()) {
                Some(i) => Err(CliError::Verification(format!("witness {i} does not verify"))),
                None => Ok(()),
            }
        }
        Command::Cache {
            action: CacheCommand::Gc { budget },
        } => {
            let dir = cli
                .cache_dir
                .as_ref()
                .ok_or_else(|| CliError::Config("cache gc needs --cache-dir or BOXDIM_CACHE_DIR".into()))?;
            let freed = boxdim::cache::cache_gc(dir, *budget)?;
            println!("freed {freed} bytes");
            Ok(())
        }
    }
}
