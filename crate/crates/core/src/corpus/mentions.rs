//! Word-boundary phrase matching used for coin aliases and lexicon terms.

use std::collections::{BTreeSet, HashMap};

use super::CoinRegistry;

/// Splits text into lowercase words. A word is a maximal run of Unicode
/// alphanumeric characters, so `$BTC`, `#btc` and `btc!` all yield `btc`.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| w.to_lowercase())
        .collect()
}

/// Normalises a configured term (alias or lexicon entry) into its word sequence.
pub fn normalize_term(term: &str) -> Vec<String> {
    tokenize(term)
}

/// Matches multi-word phrases against token streams. Each phrase maps to a
/// payload; a phrase only matches whole tokens.
#[derive(Debug, Clone)]
pub struct PhraseMatcher<T> {
    by_first: HashMap<String, Vec<(Vec<String>, T)>>,
}

impl<T: Clone> Default for PhraseMatcher<T> {
    fn default() -> Self {
        PhraseMatcher { by_first: HashMap::new() }
    }
}

impl<T: Clone> PhraseMatcher<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a phrase. Empty phrases (no word characters) are ignored and
    /// reported as `false`.
    pub fn insert(&mut self, phrase: &str, payload: T) -> bool {
        let words = normalize_term(phrase);
        let Some(first) = words.first().cloned() else {
            return false;
        };
        let bucket = self.by_first.entry(first).or_default();
        bucket.push((words, payload));
        // longest phrases first so overlapping aliases resolve deterministically
        bucket.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        true
    }

    /// Calls `hit` once per matching (position, phrase) occurrence.
    pub fn for_each_match<'a>(&'a self, tokens: &[String], mut hit: impl FnMut(&'a T)) {
        for start in 0..tokens.len() {
            let Some(candidates) = self.by_first.get(&tokens[start]) else {
                continue;
            };
            for (words, payload) in candidates {
                let end = start + words.len();
                if end <= tokens.len() && tokens[start..end] == words[..] {
                    hit(payload);
                }
            }
        }
    }

    pub fn count_matches(&self, tokens: &[String]) -> usize {
        let mut n = 0;
        self.for_each_match(tokens, |_| n += 1);
        n
    }
}

/// Alias index over a registry, answering which coins a text mentions.
#[derive(Debug, Clone)]
pub struct MentionIndex {
    matcher: PhraseMatcher<usize>,
    coin_ids: Vec<String>,
}

impl MentionIndex {
    pub fn new(registry: &CoinRegistry) -> Self {
        let mut matcher = PhraseMatcher::new();
        let mut coin_ids = Vec::with_capacity(registry.coins().len());
        for (i, coin) in registry.coins().iter().enumerate() {
            coin_ids.push(coin.id.clone());
            for alias in &coin.aliases {
                matcher.insert(alias, i);
            }
        }
        MentionIndex { matcher, coin_ids }
    }

    pub fn detect(&self, text: &str) -> BTreeSet<String> {
        self.detect_tokens(&tokenize(text))
    }

    pub fn detect_tokens(&self, tokens: &[String]) -> BTreeSet<String> {
        let mut found = BTreeSet::new();
        self.matcher.for_each_match(tokens, |&i| {
            found.insert(self.coin_ids[i].clone());
        });
        found
    }
}

/// Returns the deduplicated set of coin ids whose aliases occur in `text` on
/// word boundaries, ignoring case and `$`/`#` prefixes.
pub fn detect_coin_mentions(text: &str, registry: &CoinRegistry) -> BTreeSet<String> {
    MentionIndex::new(registry).detect(text)
}
