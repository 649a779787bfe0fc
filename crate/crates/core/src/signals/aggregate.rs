use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::label::{ClassifierVerdict, SignalLabel};
use super::series::{social_signal, social_signal_with_market, SignalVariant, SocialSignalSeries};
use super::SignalError;
use crate::corpus::{AuthorClass, Corpus, Resolution};

/// Pseudo coin id for relevant tweets that mention no coin.
pub const MARKET: &str = "MARKET";

/// Length of the trailing aggregation window, in hours.
pub const WINDOW_HOURS: i64 = 24;

/// Which authors feed the signal counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Population {
    #[default]
    Pooled,
    Influencers,
    News,
}

impl Population {
    pub fn admits(self, class: AuthorClass) -> bool {
        match self {
            Population::Pooled => true,
            Population::Influencers => class == AuthorClass::Influencer,
            Population::News => class == AuthorClass::News,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Population::Pooled => "pooled",
            Population::Influencers => "influencers",
            Population::News => "news",
        }
    }
}

impl std::str::FromStr for Population {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pooled" => Ok(Population::Pooled),
            "influencers" => Ok(Population::Influencers),
            "news" => Ok(Population::News),
            other => Err(format!("unknown population {other:?} (pooled|influencers|news)")),
        }
    }
}

/// Consecutive UTC clock hours; entry `i` is the window ending at
/// `origin + i hours`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HourGrid {
    pub origin: DateTime<Utc>,
    pub hours: usize,
}

impl HourGrid {
    pub fn new(origin: DateTime<Utc>, hours: usize) -> Result<Self, SignalError> {
        if Resolution::Hourly.floor(origin) != origin {
            return Err(SignalError::Input(format!("grid origin {origin} is not a clock hour")));
        }
        Ok(HourGrid { origin, hours })
    }

    pub fn at(&self, i: usize) -> DateTime<Utc> {
        Resolution::Hourly.advance(self.origin, i as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignalCounts<'a> {
    pub coin_id: &'a str,
    pub window_end: DateTime<Utc>,
    pub n_buy: u32,
    pub n_not_buy: u32,
}

/// Trailing-window buy/not-buy counts for every coin and the market
/// pseudo-coin over an hourly grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalTable {
    grid: HourGrid,
    counts: BTreeMap<String, Vec<[u32; 2]>>,
}

impl SignalTable {
    pub fn grid(&self) -> HourGrid {
        self.grid
    }

    /// Coin ids (without the market entry), sorted.
    pub fn coins(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str).filter(|c| *c != MARKET)
    }

    pub fn counts(&self, coin_id: &str, hour: usize) -> Option<SignalCounts<'_>> {
        let (key, series) = self.counts.get_key_value(coin_id)?;
        let [n_buy, n_not_buy] = *series.get(hour)?;
        Some(SignalCounts { coin_id: key, window_end: self.grid.at(hour), n_buy, n_not_buy })
    }

    pub fn social_signal_series(&self, coin_id: &str, variant: SignalVariant) -> Option<SocialSignalSeries> {
        self.counts.get(coin_id)?;
        let values = (0..self.grid.hours)
            .map(|h| {
                let coin = self.counts(coin_id, h).expect("hour in grid");
                match variant {
                    SignalVariant::Plain => social_signal(&coin),
                    SignalVariant::WithMarket => {
                        let market = self.counts(MARKET, h).expect("market present");
                        social_signal_with_market(&coin, &market).expect("same window end")
                    }
                }
            })
            .collect();
        Some(SocialSignalSeries { coin_id: coin_id.to_owned(), variant, origin: self.grid.origin, values })
    }

    /// Total attributions per (coin, hour) summed over the grid.
    pub fn total_attributions(&self) -> u64 {
        self.counts.values().flatten().map(|c| u64::from(c[0]) + u64::from(c[1])).sum()
    }
}

/// Counts labelled tweets in the half-open window `(t - 24h, t]` for every
/// grid hour `t`. A tweet mentioning several coins counts once for each; a
/// relevant tweet mentioning none counts toward [`MARKET`].
pub fn aggregate_signal_counts<'a>(
    corpus: &Corpus,
    mentions: &[BTreeSet<String>],
    verdicts: &[ClassifierVerdict],
    coins: impl IntoIterator<Item = &'a str>,
    grid: HourGrid,
    population: Population,
) -> Result<SignalTable, SignalError> {
    if mentions.len() != corpus.len() || verdicts.len() != corpus.len() {
        return Err(SignalError::Input(format!(
            "{} tweets but {} mention sets and {} verdicts",
            corpus.len(),
            mentions.len(),
            verdicts.len()
        )));
    }
    let mut counts: BTreeMap<String, Vec<[u32; 2]>> =
        coins.into_iter().map(|c| (c.to_owned(), vec![[0, 0]; grid.hours])).collect();
    counts.insert(MARKET.to_owned(), vec![[0, 0]; grid.hours]);
    let market_key = MARKET.to_owned();

    for ((tweet, coins), verdict) in corpus.iter().zip(mentions).zip(verdicts) {
        let Some(label) = verdict.label() else { continue };
        if !population.admits(tweet.author_class) {
            continue;
        }
        let slot = match label {
            SignalLabel::Buy => 0,
            SignalLabel::NotBuy => 1,
        };
        // window ends t with created_at <= t < created_at + 24h
        let first = Resolution::Hourly.index(grid.origin, Resolution::Hourly.ceil(tweet.created_at));
        let lo = first.max(0);
        let hi = (first + WINDOW_HOURS).min(grid.hours as i64);
        if lo >= hi {
            continue;
        }
        let targets: Vec<&String> = if coins.is_empty() { vec![&market_key] } else { coins.iter().collect() };
        for coin in targets {
            let series = counts
                .get_mut(coin.as_str())
                .ok_or_else(|| SignalError::Input(format!("tweet {} mentions unregistered coin {coin}", tweet.id)))?;
            for cell in &mut series[lo as usize..hi as usize] {
                cell[slot] += 1;
            }
        }
    }
    Ok(SignalTable { grid, counts })
}
