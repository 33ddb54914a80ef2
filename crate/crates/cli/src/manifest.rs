//! The reproducibility envelope every command writes next to its outputs.

use anyhow::Context;
use chrono::{DateTime, Utc};
use serde::Serialize;
use serde_json::Value;
use std::path::{Path, PathBuf};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub started_at: DateTime<Utc>,
    pub finished_at: DateTime<Utc>,
    /// Fully resolved configuration, sufficient to reproduce every output
    /// file byte for byte.
    pub config: Value,
    pub seeds: Value,
    /// Files the run produced, relative to the manifest's directory.
    pub outputs: Vec<String>,
    /// Command-specific results (convergence iteration, check verdicts...).
    pub summary: Value,
}

pub struct ManifestBuilder {
    command: String,
    started_at: DateTime<Utc>,
    outputs: Vec<String>,
}

impl ManifestBuilder {
    pub fn start(command: &str) -> Self {
        Self {
            command: command.to_string(),
            started_at: Utc::now(),
            outputs: Vec::new(),
        }
    }

    /// Writes a data file into `dir` and records it as an output.
    pub fn write_output(&mut self, dir: &Path, name: &str, bytes: &[u8]) -> anyhow::Result<PathBuf> {
        let path = dir.join(name);
        std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(name.to_string());
        Ok(path)
    }

    pub fn finish(
        self,
        dir: &Path,
        config: impl Serialize,
        seeds: Value,
        summary: Value,
    ) -> anyhow::Result<PathBuf> {
        let manifest = RunManifest {
            command: self.command,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_at: self.started_at,
            finished_at: Utc::now(),
            config: serde_json::to_value(config)?,
            seeds,
            outputs: self.outputs,
            summary,
        };
        let path = dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}
