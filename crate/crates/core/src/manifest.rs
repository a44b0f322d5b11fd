//! Run manifests: a small provenance record written into every output
//! bundle so a run can be reproduced from the bundle alone.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Provenance record for one command invocation.
///
/// The digest covers every configuration entry (flag values, input file
/// digests), so two manifests with equal digests describe runs over the
/// same inputs. Timestamps honor the `SOURCE_DATE_EPOCH` convention: when
/// that variable is set, both timestamps take its value and the whole
/// bundle becomes byte-reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_digest: String,
    pub seed: u64,
    pub tool_version: String,
    pub started_unix: u64,
    pub finished_unix: u64,
}

fn now_unix() -> u64 {
    if let Ok(raw) = std::env::var("SOURCE_DATE_EPOCH") {
        if let Ok(v) = raw.trim().parse::<u64>() {
            return v;
        }
    }
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Hex digest (16 chars) over sorted `key=value` configuration entries.
pub fn config_digest<'a>(entries: impl IntoIterator<Item = (&'a str, String)>) -> String {
    let sorted: BTreeMap<&str, String> = entries.into_iter().collect();
    let mut hasher = Sha256::new();
    for (k, v) in &sorted {
        hasher.update(k.as_bytes());
        hasher.update(b"=");
        hasher.update(v.as_bytes());
        hasher.update(b"\n");
    }
    let digest = hasher.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Hex digest (16 chars) of raw file bytes, for input provenance entries.
pub fn bytes_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    /// Starts a manifest for `command` with the given configuration
    /// entries; `finish` stamps the closing timestamp.
    pub fn start<'a>(
        command: &str,
        seed: u64,
        entries: impl IntoIterator<Item = (&'a str, String)>,
    ) -> Self {
        let now = now_unix();
        RunManifest {
            command: command.to_string(),
            config_digest: config_digest(entries),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: now,
            finished_unix: now,
        }
    }

    pub fn finish(&mut self) {
        self.finished_unix = now_unix().max(self.started_unix);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Writes `manifest.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::write(dir.join("manifest.json"), self.to_json())?;
        Ok(())
    }
}
