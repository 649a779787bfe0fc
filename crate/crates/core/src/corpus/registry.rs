use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::mentions::normalize_term;
use super::CorpusError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinEntry {
    pub id: String,
    pub aliases: Vec<String>,
    #[serde(default)]
    pub tags: Vec<String>,
}

impl CoinEntry {
    pub fn new(id: &str, aliases: &[&str], tags: &[&str]) -> Self {
        CoinEntry {
            id: id.to_owned(),
            aliases: aliases.iter().map(|s| (*s).to_owned()).collect(),
            tags: tags.iter().map(|s| (*s).to_owned()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinRegistry {
    coins: Vec<CoinEntry>,
}

impl CoinRegistry {
    /// Validates and wraps coin entries: ids unique, every coin has at least
    /// one usable alias, and no alias (after normalisation) names two coins.
    pub fn new(coins: Vec<CoinEntry>) -> Result<Self, CorpusError> {
        let mut ids = BTreeSet::new();
        let mut alias_owner: HashMap<Vec<String>, &str> = HashMap::new();
        for coin in &coins {
            if coin.id.trim().is_empty() {
                return Err(CorpusError::Invalid("coin id must be non-empty".into()));
            }
            if !ids.insert(coin.id.as_str()) {
                return Err(CorpusError::Invalid(format!("duplicate coin id {:?}", coin.id)));
            }
            if coin.aliases.is_empty() {
                return Err(CorpusError::Invalid(format!("coin {:?} has no aliases", coin.id)));
            }
            for alias in &coin.aliases {
                let key = normalize_term(alias);
                if key.is_empty() {
                    return Err(CorpusError::Invalid(format!(
                        "coin {:?} has an alias without word characters: {alias:?}",
                        coin.id
                    )));
                }
                if let Some(prev) = alias_owner.insert(key, &coin.id) {
                    if prev != coin.id {
                        return Err(CorpusError::Invalid(format!(
                            "alias {alias:?} maps to both {prev:?} and {:?}",
                            coin.id
                        )));
                    }
                }
            }
        }
        Ok(CoinRegistry { coins })
    }

    pub fn coins(&self) -> &[CoinEntry] {
        &self.coins
    }

    pub fn get(&self, id: &str) -> Option<&CoinEntry> {
        self.coins.iter().find(|c| c.id == id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.coins.iter().map(|c| c.id.as_str())
    }

    /// Tag lists keyed by coin id.
    pub fn tags(&self) -> BTreeMap<&str, &[String]> {
        self.coins.iter().map(|c| (c.id.as_str(), c.tags.as_slice())).collect()
    }

    pub fn from_json(raw: &str) -> Result<Self, CorpusError> {
        #[derive(Deserialize)]
        struct File {
            coins: Vec<CoinEntry>,
        }
        let file: File = serde_json::from_str(raw).map_err(|e| CorpusError::Invalid(format!("registry: {e}")))?;
        CoinRegistry::new(file.coins)
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let raw = fs::read_to_string(path).map_err(|e| CorpusError::io(path, e))?;
        Self::from_json(&raw).map_err(|e| e.with_path(path))
    }
}
