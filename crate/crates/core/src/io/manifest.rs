use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::commands::{run_command, Command};
use super::{IoError, RunConfig};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDigest {
    /// Path relative to the output directory.
    pub file: String,
    pub sha256: String,
}

/// Everything needed to re-run a command: the full configuration (which
/// carries the master seed) plus digests of what it wrote.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: String,
    pub command: Command,
    pub master_seed: u64,
    pub schema_hash: Option<String>,
    pub config: RunConfig,
    pub outputs: Vec<OutputDigest>,
}

pub(crate) fn digest_file(path: &Path) -> Result<String, IoError> {
    let bytes = std::fs::read(path).map_err(|e| IoError::file(path, e))?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

impl Manifest {
    pub fn new(command: Command, config: &RunConfig, schema_hash: Option<String>, files: &[PathBuf]) -> Result<Self, IoError> {
        let mut outputs = Vec::with_capacity(files.len());
        for f in files {
            let rel = f.strip_prefix(&config.output).unwrap_or(f);
            outputs.push(OutputDigest {
                file: rel.display().to_string(),
                sha256: digest_file(f)?,
            });
        }
        Ok(Manifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            master_seed: config.seed,
            schema_hash,
            config: config.clone(),
            outputs,
        })
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, IoError> {
        let path = dir.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(self).map_err(|e| IoError::Manifest(e.to_string()))?;
        std::fs::write(&path, text).map_err(|e| IoError::file(&path, e))?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path).map_err(|e| IoError::file(path, e))?;
        serde_json::from_str(&text).map_err(|e| IoError::Manifest(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReplayReport {
    pub output: PathBuf,
    /// Files whose digest differs from the manifest, or that were not written.
    pub mismatches: Vec<String>,
}

impl ReplayReport {
    pub fn identical(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Re-runs the command recorded in `manifest_path` into `output` and
/// compares every output digest.
pub fn replay(manifest_path: &Path, output: &Path) -> Result<ReplayReport, IoError> {
    let manifest = Manifest::read(manifest_path)?;
    let mut config = manifest.config.clone();
    config.output = output.to_path_buf();
    run_command(manifest.command, &config)?;
    let mut mismatches = Vec::new();
    for o in &manifest.outputs {
        let path = output.join(&o.file);
        match digest_file(&path) {
            Ok(d) if d == o.sha256 => {}
            _ => mismatches.push(o.file.clone()),
        }
    }
    Ok(ReplayReport {
        output: output.to_path_buf(),
        mismatches,
    })
}
