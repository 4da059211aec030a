//! Writing task artifacts to disk.

use std::fs;
use std::path::{Path, PathBuf};

use crate::tasks::Artifacts;
use crate::{CliError, RunConfig};

/// Paths of the CSV table and JSON summary for a run.
pub fn paths(cfg: &RunConfig, task: &str) -> (PathBuf, PathBuf) {
    let dir = cfg.output.dir.clone().unwrap_or_else(|| PathBuf::from("."));
    let csv = cfg.output.csv.clone().unwrap_or_else(|| format!("{task}.csv"));
    let summary = cfg.output.summary.clone().unwrap_or_else(|| format!("{task}.json"));
    (dir.join(csv), dir.join(summary))
}

pub fn write(cfg: &RunConfig, a: &Artifacts, witness: Option<&Path>) -> Result<(), CliError> {
    let (csv, summary) = paths(cfg, a.task);
    if let Some(dir) = csv.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(&csv, &a.csv)?;
    let mut text = serde_json::to_string_pretty(&a.summary)?;
    text.push('\n');
    fs::write(&summary, text)?;
    if let Some(path) = witness {
        let file = a
            .witnesses
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("task {} produces no witnesses", a.task)))?;
        fs::write(path, serde_json::to_string(file)?)?;
    }
    Ok(())
}
