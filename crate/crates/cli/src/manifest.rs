use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";

/// Provenance record written next to every run's outputs. It carries no
/// timestamps, so identical runs give identical manifests.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub subcommand: String,
    /// SHA-256 of the configuration text, when a file was given.
    pub config_hash: Option<String>,
    pub deterministic: bool,
    pub threads: usize,
    /// Output file name to SHA-256 of its bytes.
    pub files: BTreeMap<String, String>,
    /// Every measured scalar, keyed by a dotted name.
    pub constants: BTreeMap<String, Option<f64>>,
    /// Set when the run failed after the output directory was opened.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Manifest {
    pub fn new(subcommand: &str, config_text: Option<&str>, deterministic: bool, threads: usize) -> Self {
        Manifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            config_hash: config_text.map(|t| sha256_hex(t.as_bytes())),
            deterministic,
            threads,
            ..Default::default()
        }
    }

    /// Non-finite values are stored as `null`.
    pub fn constant(&mut self, key: impl Into<String>, value: f64) {
        self.constants.insert(key.into(), value.is_finite().then_some(value));
    }

    pub fn optional(&mut self, key: impl Into<String>, value: Option<f64>) {
        self.constants.insert(key.into(), value.filter(|v| v.is_finite()));
    }

    /// Hashes every listed file under `dir`.
    pub fn record_files(&mut self, dir: &Path, names: &[String]) -> Result<(), CliError> {
        for name in names {
            let bytes = std::fs::read(dir.join(name)).map_err(|e| CliError::io(name, e))?;
            self.files.insert(name.clone(), sha256_hex(&bytes));
        }
        Ok(())
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(dir.join(MANIFEST_NAME), text + "\n").map_err(|e| CliError::io(MANIFEST_NAME, e))
    }

    pub fn read(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(MANIFEST_NAME);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}
