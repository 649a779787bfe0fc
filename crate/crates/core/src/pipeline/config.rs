use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::econometrics::{MeanMode, SignificanceBands};
use crate::netgraph::{CentralityOptions, FilterRule, InfluencerCriteria};
use crate::signals::{ExternalConfig, Population};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub inputs: InputPaths,
    #[serde(default)]
    pub classifier: ClassifierChoice,
    #[serde(default)]
    pub signals: SignalSettings,
    #[serde(default)]
    pub network: NetworkSettings,
    #[serde(default)]
    pub econometrics: EconSettings,
    #[serde(default)]
    pub run: RunSettings,
    /// Directory relative input paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputPaths {
    pub tweets: PathBuf,
    pub prices: PathBuf,
    pub registry: PathBuf,
    #[serde(default)]
    pub lexicon: Option<PathBuf>,
    #[serde(default)]
    pub profiles: Option<PathBuf>,
    #[serde(default)]
    pub candidate_lists: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ClassifierChoice {
    #[default]
    Lexicon,
    External(ExternalConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct SignalSettings {
    pub population: Population,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSettings {
    pub filter: FilterRule,
    /// Share of total co-mention weight a pair needs to be listed.
    pub edge_share: f64,
    pub top_k: usize,
    pub centrality: CentralityOptions,
    pub influencer: InfluencerCriteria,
    /// Reference time for the activity check; defaults to the last tweet.
    pub as_of: Option<String>,
}

impl Default for NetworkSettings {
    fn default() -> Self {
        NetworkSettings {
            filter: FilterRule::default(),
            edge_share: 0.01,
            top_k: 1000,
            centrality: CentralityOptions::default(),
            influencer: InfluencerCriteria::default(),
            as_of: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EconSettings {
    pub granger_max_lag: usize,
    pub xcorr_hourly_max: usize,
    pub xcorr_daily_max: usize,
    pub mean_mode: MeanMode,
    pub bands: SignificanceBands,
    /// Report non-stationary return series as warnings instead of failing.
    pub adf_override: bool,
    /// Coins carrying any of these tags are left out of the return matrix.
    pub matrix_exclude_tags: Vec<String>,
}

impl Default for EconSettings {
    fn default() -> Self {
        EconSettings {
            granger_max_lag: 24,
            xcorr_hourly_max: 24,
            xcorr_daily_max: 7,
            mean_mode: MeanMode::Overlap,
            bands: SignificanceBands::default(),
            adf_override: false,
            matrix_exclude_tags: vec!["stablecoin".into()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSettings {
    pub out: PathBuf,
    pub workers: Option<usize>,
    pub seed: u64,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings { out: PathBuf::from("out"), workers: None, seed: 0 }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    pub population: Option<Population>,
}

impl PipelineConfig {
    pub fn from_toml(raw: &str, base_dir: &Path) -> Result<Self, String> {
        let mut cfg: PipelineConfig = toml::from_str(raw).map_err(|e| e.to_string())?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let raw = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_toml(&raw, &base).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), String> {
        if let Some(out) = &o.out {
            self.run.out = out.clone();
        }
        if let Some(w) = o.workers {
            self.run.workers = Some(w);
        }
        if let Some(s) = o.seed {
            self.run.seed = s;
        }
        if let Some(p) = o.population {
            self.signals.population = p;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), String> {
        let i = &self.inputs;
        for (field, p) in [("inputs.tweets", &i.tweets), ("inputs.prices", &i.prices), ("inputs.registry", &i.registry)] {
            if p.as_os_str().is_empty() {
                return Err(format!("{field}: path must be non-empty"));
            }
        }
        for (n, p) in i.candidate_lists.iter().enumerate() {
            if p.as_os_str().is_empty() {
                return Err(format!("inputs.candidate_lists[{n}]: path must be non-empty"));
            }
        }
        match &self.classifier {
            ClassifierChoice::Lexicon if i.lexicon.is_none() => {
                return Err("inputs.lexicon: required by the lexicon classifier".into())
            }
            ClassifierChoice::External(c) if c.endpoint.trim().is_empty() => {
                return Err("classifier.endpoint: must be non-empty".into())
            }
            _ => {}
        }
        let e = &self.econometrics;
        for (field, v) in [
            ("econometrics.granger_max_lag", e.granger_max_lag),
            ("econometrics.xcorr_hourly_max", e.xcorr_hourly_max),
            ("econometrics.xcorr_daily_max", e.xcorr_daily_max),
            ("network.top_k", self.network.top_k),
        ] {
            if v == 0 {
                return Err(format!("{field}: must be at least 1"));
            }
        }
        let n = &self.network;
        if !(n.edge_share > 0.0 && n.edge_share < 1.0) {
            return Err(format!("network.edge_share: must lie in (0, 1), got {}", n.edge_share));
        }
        match n.filter {
            FilterRule::DegreeShare { theta } if !(theta > 0.0 && theta < 1.0) => {
                return Err(format!("network.filter.theta: must lie in (0, 1), got {theta}"))
            }
            _ => {}
        }
        n.centrality.validate().map_err(|e| format!("network.centrality: {e}"))?;
        n.influencer.validate().map_err(|e| format!("network.influencer: {e}"))?;
        if let Some(t) = &n.as_of {
            crate::corpus::parse_utc(t).map_err(|e| format!("network.as_of: {e}"))?;
        }
        if self.run.workers == Some(0) {
            return Err("run.workers: must be at least 1".into());
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// Settings that affect analysis outputs, as recorded in the manifest.
    /// The output directory and worker count are left out.
    pub fn snapshot(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(run) = v.get_mut("run").and_then(|r| r.as_object_mut()) {
            run.remove("out");
            run.remove("workers");
        }
        v
    }
}
