use std::collections::BTreeMap;
use std::fmt::Display;

use chrono::{DateTime, SecondsFormat, Utc};
use eqgames_core::reports::RunManifest;

/// Collects the provenance of one command invocation.
pub struct ManifestBuilder {
    command: String,
    parameters: BTreeMap<String, String>,
    seed: Option<u64>,
    started: String,
}

/// Current time, or `SOURCE_DATE_EPOCH` when set so outputs can be
/// byte-identical across runs.
fn timestamp() -> String {
    let pinned = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0));
    pinned
        .unwrap_or_else(Utc::now)
        .to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl ManifestBuilder {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seed: None,
            started: timestamp(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Display) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn finish(self) -> RunManifest {
        RunManifest {
            command: self.command,
            parameters: self.parameters,
            seed: self.seed,
            versions: format!(
                "eqgames {} (eqgames-core {})",
                env!("CARGO_PKG_VERSION"),
                eqgames_core::VERSION
            ),
            started: self.started,
            finished: timestamp(),
        }
    }
}

/// Manifest as `#`-prefixed CSV comment lines.
pub fn csv_comments(m: &RunManifest) -> String {
    let mut out = String::new();
    out.push_str(&format!("# command: {}\n", m.command));
    for (k, v) in &m.parameters {
        out.push_str(&format!("# parameter {k}: {v}\n"));
    }
    if let Some(seed) = m.seed {
        out.push_str(&format!("# seed: {seed}\n"));
    }
    out.push_str(&format!("# versions: {}\n", m.versions));
    out.push_str(&format!("# started: {}\n", m.started));
    out.push_str(&format!("# finished: {}\n", m.finished));
    out
}
