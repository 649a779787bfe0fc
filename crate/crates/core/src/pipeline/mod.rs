//! End-to-end runs: config, stage orchestration, output files and manifest.

mod config;
mod manifest;
mod output;
mod report;
mod run;
mod simulate;

use std::fmt;

use serde::Serialize;

pub use config::{
    ClassifierChoice, EconSettings, InputPaths, NetworkSettings, Overrides, PipelineConfig, RunSettings, SignalSettings,
};
pub use manifest::{InputDigest, RunManifest, StageRecord, MANIFEST_FILE};
pub use output::{fmt_f64, fmt_prec, sha256_hex, validate, FileRecord, OutputWriter, Schema};
pub use report::{
    render_significance_table, summarize_corpus, CoinSummary, CorpusSummary, Share, SignificanceCell, SignificanceTable,
};
pub use run::{run_pipeline, Command, RunOutcome, LAG_CONVENTION};
pub use simulate::{simulate_fixture, SimulationOptions};

/// Pipeline stages in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Config,
    Ingest,
    Classify,
    Aggregate,
    Network,
    Econometrics,
    Report,
}

impl Stage {
    pub fn exit_code(self) -> i32 {
        match self {
            Stage::Config => 2,
            Stage::Ingest => 3,
            Stage::Classify => 4,
            Stage::Aggregate => 5,
            Stage::Network => 6,
            Stage::Econometrics => 7,
            Stage::Report => 8,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Config => "config",
            Stage::Ingest => "ingest",
            Stage::Classify => "classify",
            Stage::Aggregate => "aggregate",
            Stage::Network => "network",
            Stage::Econometrics => "econometrics",
            Stage::Report => "report",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{stage} stage failed: {message}")]
pub struct PipelineError {
    pub stage: Stage,
    pub message: String,
}

impl PipelineError {
    pub fn new(stage: Stage, message: impl fmt::Display) -> Self {
        PipelineError { stage, message: message.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        self.stage.exit_code()
    }
}
