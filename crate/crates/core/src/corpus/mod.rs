//! Tweets, prices and the coin registry: loading, validation, mention
//! detection and time bucketing.

mod buckets;
mod mentions;
mod prices;
mod registry;
mod stats;
mod tweet;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use rayon::prelude::*;

pub use buckets::{count_tweets, resample_prices, BucketSeries, Resolution};
pub use mentions::{detect_coin_mentions, normalize_term, tokenize, MentionIndex, PhraseMatcher};
pub use prices::{load_prices, parse_prices, PriceSeries};
pub use registry::{CoinEntry, CoinRegistry};
pub use stats::{mention_statistics, GroupStats, SplitBy, UNLABELED};
pub use tweet::{
    format_utc, load_tweets, parse_tweets, parse_utc, write_tweets, AuthorClass, Corpus, LoadReport, RejectReason,
    Rejection, Tweet,
};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{}: {source}", path.as_ref().map_or_else(|| "<input>".to_owned(), |p| p.display().to_string()))]
    Io {
        path: Option<PathBuf>,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("{coin}: missing hourly prices from {} to {}", format_utc(.from), format_utc(.to))]
    Gap { coin: String, from: DateTime<Utc>, to: DateTime<Utc> },
}

impl CorpusError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        CorpusError::Io { path: Some(path.to_owned()), source }
    }

    fn with_path(self, path: &Path) -> Self {
        match self {
            CorpusError::Io { path: None, source } => CorpusError::io(path, source),
            CorpusError::Invalid(msg) => CorpusError::Invalid(format!("{}: {msg}", path.display())),
            other => other,
        }
    }
}

/// Mention sets for every tweet, in corpus order.
pub fn detect_all(corpus: &Corpus, index: &MentionIndex) -> Vec<BTreeSet<String>> {
    corpus.tweets().par_iter().map(|t| index.detect(&t.text)).collect()
}
