use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{Corpus, CorpusError};
use crate::signals::SignalLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitBy {
    AuthorClass,
    SignalLabel,
}

/// Mention summary for one group of tweets. `mean` is `None` for an empty
/// group rather than a misleading zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupStats {
    pub tweets: usize,
    pub mentions: usize,
    pub mean: Option<f64>,
    pub histogram: BTreeMap<usize, usize>,
}

impl GroupStats {
    fn empty() -> Self {
        GroupStats { tweets: 0, mentions: 0, mean: None, histogram: BTreeMap::new() }
    }
}

pub const UNLABELED: &str = "unlabeled";

/// Mean coin mentions per tweet and mention-count histogram, per group.
///
/// `mentions[i]` is the mention set of tweet `i`; `labels` is required when
/// splitting by signal label (tweets without a label form the `unlabeled`
/// group).
pub fn mention_statistics(
    corpus: &Corpus,
    mentions: &[BTreeSet<String>],
    split_by: SplitBy,
    labels: Option<&[Option<SignalLabel>]>,
) -> Result<BTreeMap<String, GroupStats>, CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::Invalid("mention statistics need a non-empty corpus".into()));
    }
    if mentions.len() != corpus.len() {
        return Err(CorpusError::Invalid(format!(
            "{} mention sets for {} tweets",
            mentions.len(),
            corpus.len()
        )));
    }
    let mut groups: BTreeMap<String, GroupStats> = BTreeMap::new();
    match split_by {
        SplitBy::AuthorClass => {
            for class in crate::corpus::AuthorClass::ALL {
                groups.insert(class.as_str().to_owned(), GroupStats::empty());
            }
        }
        SplitBy::SignalLabel => {
            for label in SignalLabel::ALL {
                groups.insert(label.as_str().to_owned(), GroupStats::empty());
            }
            groups.insert(UNLABELED.to_owned(), GroupStats::empty());
        }
    }
    let labels = match split_by {
        SplitBy::SignalLabel => {
            let l = labels.ok_or_else(|| CorpusError::Invalid("signal-label split needs labels".into()))?;
            if l.len() != corpus.len() {
                return Err(CorpusError::Invalid(format!("{} labels for {} tweets", l.len(), corpus.len())));
            }
            Some(l)
        }
        SplitBy::AuthorClass => None,
    };
    for (i, tweet) in corpus.iter().enumerate() {
        let key = match (split_by, labels) {
            (SplitBy::AuthorClass, _) => tweet.author_class.as_str(),
            (SplitBy::SignalLabel, Some(l)) => l[i].map_or(UNLABELED, SignalLabel::as_str),
            (SplitBy::SignalLabel, None) => unreachable!(),
        };
        let g = groups.get_mut(key).expect("group pre-registered");
        let m = mentions[i].len();
        g.tweets += 1;
        g.mentions += m;
        *g.histogram.entry(m).or_default() += 1;
    }
    for g in groups.values_mut() {
        g.mean = (g.tweets > 0).then(|| g.mentions as f64 / g.tweets as f64);
    }
    Ok(groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_utc, AuthorClass, Tweet};

    fn tweet(id: &str, class: AuthorClass) -> Tweet {
        Tweet {
            id: id.into(),
            author_id: "a".into(),
            author_class: class,
            created_at: parse_utc("2024-01-01T00:00:00Z").unwrap(),
            text: String::new(),
            followers: None,
            engagement: None,
            retweeted_author_id: None,
        }
    }

    fn set(ids: &[&str]) -> BTreeSet<String> {
        ids.iter().map(|s| (*s).to_owned()).collect()
    }

    #[test]
    fn mean_and_histogram() {
        let corpus = Corpus::new(vec![tweet("1", AuthorClass::News), tweet("2", AuthorClass::News)]).unwrap();
        let stats =
            mention_statistics(&corpus, &[set(&["BTC"]), set(&["BTC", "ETH"])], SplitBy::AuthorClass, None).unwrap();
        let news = &stats["news"];
        assert_eq!(news.mean, Some(1.5));
        assert_eq!(news.histogram, BTreeMap::from([(1, 1), (2, 1)]));
        assert_eq!(stats["influencer"].mean, None);
    }

    #[test]
    fn no_mentions_mean_zero() {
        let corpus = Corpus::new(vec![tweet("1", AuthorClass::Influencer), tweet("2", AuthorClass::Influencer)]).unwrap();
        let stats = mention_statistics(&corpus, &[set(&[]), set(&[])], SplitBy::AuthorClass, None).unwrap();
        assert_eq!(stats["influencer"].mean, Some(0.0));
    }

    #[test]
    fn split_by_label() {
        let corpus = Corpus::new(vec![tweet("1", AuthorClass::News), tweet("2", AuthorClass::News)]).unwrap();
        let labels = [Some(SignalLabel::Buy), None];
        let stats =
            mention_statistics(&corpus, &[set(&["A", "B"]), set(&["A"])], SplitBy::SignalLabel, Some(&labels)).unwrap();
        assert_eq!(stats["buy"].mean, Some(2.0));
        assert_eq!(stats["not_buy"].mean, None);
        assert_eq!(stats[UNLABELED].mean, Some(1.0));
        assert!(mention_statistics(&corpus, &[set(&[]), set(&[])], SplitBy::SignalLabel, None).is_err());
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(mention_statistics(&Corpus::default(), &[], SplitBy::AuthorClass, None).is_err());
    }
}
