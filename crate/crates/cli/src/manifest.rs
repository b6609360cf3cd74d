use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// When set, both manifest timestamps are this Unix time, making bundles
/// reproducible byte for byte.
pub const EPOCH_ENV: &str = "SOURCE_DATE_EPOCH";

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    /// SHA-256 of the input file, hex encoded.
    pub input_digest: Option<String>,
    pub seed: u64,
    pub version: String,
    pub started_at: String,
    pub finished_at: String,
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Current time, or the pinned epoch when [`EPOCH_ENV`] is set.
pub fn timestamp() -> CliResult<String> {
    let now = match std::env::var(EPOCH_ENV) {
        Ok(v) => {
            let secs: i64 = v.trim().parse().map_err(|_| CliError::Usage(format!("{EPOCH_ENV}=`{v}` is not an integer")))?;
            DateTime::<Utc>::from_timestamp(secs, 0).ok_or_else(|| CliError::Usage(format!("{EPOCH_ENV} out of range")))?
        }
        Err(_) => Utc::now(),
    };
    Ok(now.to_rfc3339_opts(SecondsFormat::Secs, true))
}

impl RunManifest {
    /// Starts a manifest; the digest is taken here, before any processing.
    pub fn begin(command: &str, config: &impl Serialize, input: Option<&Path>, seed: u64) -> CliResult<Self> {
        let started_at = timestamp()?;
        Ok(Self {
            command: command.to_string(),
            config: serde_json::to_value(config).map_err(|e| CliError::Internal(e.to_string()))?,
            input_digest: input.map(sha256_file).transpose()?,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            finished_at: started_at.clone(),
            started_at,
        })
    }

    pub fn finish(mut self, dir: &Path) -> CliResult<()> {
        self.finished_at = timestamp()?;
        let mut text = serde_json::to_string_pretty(&self).map_err(|e| CliError::Internal(e.to_string()))?;
        text.push('\n');
        let path = dir.join("manifest.json");
        std::fs::write(&path, text).map_err(|e| CliError::io(path, e))
    }
}
