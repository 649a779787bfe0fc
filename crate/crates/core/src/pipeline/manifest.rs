use std::collections::BTreeMap;

use serde::Serialize;

use super::output::FileRecord;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    /// Path as written in the config.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageRecord {
    pub stage: String,
    /// Rows written per output file.
    pub rows: BTreeMap<String, usize>,
    pub wall_ms: u64,
}

/// Everything needed to reproduce and audit a run. Only `wall_ms` varies
/// between identical runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub status: String,
    pub failed_stage: Option<String>,
    pub error: Option<String>,
    pub config: serde_json::Value,
    pub inputs: BTreeMap<String, InputDigest>,
    pub stages: Vec<StageRecord>,
    pub outputs: BTreeMap<String, FileRecord>,
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            command: command.to_owned(),
            status: "running".into(),
            failed_stage: None,
            error: None,
            config,
            inputs: BTreeMap::new(),
            stages: Vec::new(),
            outputs: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    /// JSON with every `wall_ms` zeroed, for comparing runs.
    pub fn without_timing(&self) -> serde_json::Value {
        let mut m = self.clone();
        for s in &mut m.stages {
            s.wall_ms = 0;
        }
        serde_json::to_value(m).expect("manifest serializes")
    }
}
