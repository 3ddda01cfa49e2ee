//! Experiment artifacts: one JSON manifest per run (parameters, seed,
//! verdicts, artifact inventory) plus CSVs of raw trial data. CSV bodies are
//! byte-identical across runs with equal parameters and seed; wall-clock
//! time lives only in the manifest.

use crate::Result;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Debug, Clone, Serialize)]
pub struct ArtifactRef {
    pub file: String,
    pub rows: usize,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub seed: u64,
    pub params: serde_json::Value,
    pub verdicts: serde_json::Value,
    pub timestamp_unix_s: u64,
    pub artifacts: Vec<ArtifactRef>,
}

impl Manifest {
    pub fn new(command: &str, seed: u64, params: impl Serialize) -> Result<Self> {
        Ok(Manifest {
            command: command.to_string(),
            seed,
            params: serde_json::to_value(params)?,
            verdicts: serde_json::Value::Null,
            timestamp_unix_s: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            artifacts: Vec::new(),
        })
    }

    pub fn set_verdicts(&mut self, verdicts: impl Serialize) -> Result<()> {
        self.verdicts = serde_json::to_value(verdicts)?;
        Ok(())
    }

    pub fn record_artifact(&mut self, file: &Path, rows: usize) {
        self.artifacts.push(ArtifactRef {
            file: file
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
            rows,
        });
    }

    /// Writes `<command>_seed<seed>.manifest.json` under `dir` and returns
    /// the path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}_seed{}.manifest.json", self.command, self.seed));
        std::fs::write(&path, serde_json::to_string_pretty(self)?)?;
        Ok(path)
    }
}

/// Writes a CSV of raw trial rows, returning the path and row count
/// (header excluded).
pub fn write_csv(
    dir: &Path,
    name: &str,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(PathBuf, usize)> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut writer = csv::Writer::from_path(&path)?;
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok((path, rows.len()))
}
