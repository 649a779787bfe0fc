use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::output::fmt_prec;
use crate::corpus::{AuthorClass, Corpus};
use crate::econometrics::{GrangerRow, SignificanceBands};
use crate::signals::{ClassifierVerdict, SignalLabel, MARKET};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Share {
    pub count: usize,
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoinSummary {
    /// Tweets mentioning the coin, any label.
    pub mentions: usize,
    pub buy: Share,
    pub not_buy: Share,
    /// `buy / not_buy`; absent when no tweet was labelled not-buy.
    pub buy_to_not_buy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusSummary {
    pub tweets: usize,
    pub author_class: BTreeMap<String, Share>,
    pub relevance: BTreeMap<String, Share>,
    /// Buy / not-buy split of relevant tweets.
    pub signal: BTreeMap<String, Share>,
    /// Per coin, plus the market entry for relevant tweets naming no coin.
    pub coins: BTreeMap<String, CoinSummary>,
}

fn shares<'a>(counts: impl IntoIterator<Item = (&'a str, usize)>) -> BTreeMap<String, Share> {
    let counts: Vec<(&str, usize)> = counts.into_iter().collect();
    let total: usize = counts.iter().map(|c| c.1).sum();
    counts
        .into_iter()
        .map(|(k, count)| {
            let share = if total == 0 { 0.0 } else { count as f64 / total as f64 };
            (k.to_owned(), Share { count, share })
        })
        .collect()
}

/// Author-class shares, relevance and buy/not-buy shares, and per-coin
/// mention and label counts. Every share breakdown sums to one unless its
/// population is empty, in which case all shares are zero.
pub fn summarize_corpus(
    corpus: &Corpus,
    mentions: &[BTreeSet<String>],
    verdicts: &[ClassifierVerdict],
    coins: &[String],
) -> CorpusSummary {
    let mut by_class: BTreeMap<&str, usize> = AuthorClass::ALL.iter().map(|c| (c.as_str(), 0)).collect();
    let mut relevant = 0;
    let mut labels = [0usize; 2];
    let mut per_coin: BTreeMap<&str, [usize; 3]> =
        coins.iter().map(String::as_str).chain([MARKET]).map(|c| (c, [0; 3])).collect();

    for ((t, set), v) in corpus.iter().zip(mentions).zip(verdicts) {
        *by_class.get_mut(t.author_class.as_str()).expect("known class") += 1;
        let label = v.label();
        if let Some(l) = label {
            relevant += 1;
            labels[(l == SignalLabel::NotBuy) as usize] += 1;
        }
        let targets: Vec<&str> = if set.is_empty() {
            if label.is_some() { vec![MARKET] } else { vec![] }
        } else {
            set.iter().map(String::as_str).collect()
        };
        for c in targets {
            if let Some(cell) = per_coin.get_mut(c) {
                cell[0] += 1;
                if let Some(l) = label {
                    cell[1 + (l == SignalLabel::NotBuy) as usize] += 1;
                }
            }
        }
    }

    let coins = per_coin
        .into_iter()
        .map(|(c, [m, b, nb])| {
            let split = shares([("buy", b), ("not_buy", nb)]);
            let summary = CoinSummary {
                mentions: m,
                buy: split["buy"].clone(),
                not_buy: split["not_buy"].clone(),
                buy_to_not_buy: (nb > 0).then(|| b as f64 / nb as f64),
            };
            (c.to_owned(), summary)
        })
        .collect();

    CorpusSummary {
        tweets: corpus.len(),
        author_class: shares(by_class),
        relevance: shares([("relevant", relevant), ("irrelevant", corpus.len() - relevant)]),
        signal: shares([("buy", labels[0]), ("not_buy", labels[1])]),
        coins,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignificanceCell {
    pub p_value: Option<f64>,
    pub band: String,
}

/// Lags as rows, coins as columns; each p-value mapped to its tightest band.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignificanceTable {
    pub convention: String,
    pub bands: Vec<f64>,
    pub coins: Vec<String>,
    pub lags: Vec<usize>,
    /// `cells[lag index][coin index]`.
    pub cells: Vec<Vec<SignificanceCell>>,
}

impl SignificanceTable {
    pub fn csv_header(&self) -> Vec<String> {
        let mut h = vec!["lag_hours".to_owned()];
        for c in &self.coins {
            h.push(c.clone());
            h.push(format!("{c}_band"));
        }
        h
    }

    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.lags
            .iter()
            .zip(&self.cells)
            .map(|(lag, row)| {
                let mut r = vec![lag.to_string()];
                for cell in row {
                    r.push(cell.p_value.map_or_else(|| "NA".to_owned(), |p| fmt_prec(p, 6)));
                    r.push(cell.band.clone());
                }
                r
            })
            .collect()
    }
}

pub fn render_significance_table(
    rows: &[(String, Vec<GrangerRow>)],
    bands: &SignificanceBands,
    convention: &str,
) -> SignificanceTable {
    let lags: Vec<usize> =
        rows.iter().flat_map(|(_, r)| r.iter().map(|g| g.lag)).collect::<BTreeSet<_>>().into_iter().collect();
    let cells = lags
        .iter()
        .map(|&lag| {
            rows.iter()
                .map(|(_, r)| {
                    let p = r.iter().find(|g| g.lag == lag).and_then(|g| g.outcome.as_ref().ok()).map(|g| g.p_value);
                    SignificanceCell { p_value: p, band: p.map(|p| bands.label(p)).unwrap_or_default() }
                })
                .collect()
        })
        .collect();
    SignificanceTable {
        convention: convention.to_owned(),
        bands: bands.thresholds().to_vec(),
        coins: rows.iter().map(|(c, _)| c.clone()).collect(),
        lags,
        cells,
    }
}
