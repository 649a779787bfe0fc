use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::label::{ClassifierVerdict, RawLabel, VerdictSource};
use super::{Classifier, SignalError};
use crate::corpus::{normalize_term, tokenize, MentionIndex, PhraseMatcher};

/// Term lists for the offline classifier, as read from `lexicon.toml`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    pub relevance_terms: Vec<String>,
    pub bullish_terms: Vec<String>,
    pub bearish_terms: Vec<String>,
}

impl Lexicon {
    pub fn from_toml(raw: &str) -> Result<Self, SignalError> {
        let lex: Lexicon = toml::from_str(raw).map_err(|e| SignalError::Config(format!("lexicon: {e}")))?;
        lex.validate()?;
        Ok(lex)
    }

    pub fn load(path: &Path) -> Result<Self, SignalError> {
        let raw = fs::read_to_string(path).map_err(|e| SignalError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&raw)
    }

    /// Bullish and bearish lists must not share a term.
    pub fn validate(&self) -> Result<(), SignalError> {
        let bull: BTreeSet<Vec<String>> = self.bullish_terms.iter().map(|t| normalize_term(t)).collect();
        for t in &self.bearish_terms {
            if bull.contains(&normalize_term(t)) {
                return Err(SignalError::Config(format!("term {t:?} is both bullish and bearish")));
            }
        }
        Ok(())
    }
}

/// Compiled lexicon, optionally aware of coin aliases (a coin mention alone
/// makes a tweet relevant).
#[derive(Debug, Clone)]
pub struct LexiconClassifier {
    relevance: PhraseMatcher<()>,
    bullish: PhraseMatcher<()>,
    bearish: PhraseMatcher<()>,
    mentions: Option<MentionIndex>,
}

impl LexiconClassifier {
    pub fn new(lexicon: &Lexicon, mentions: Option<MentionIndex>) -> Result<Self, SignalError> {
        lexicon.validate()?;
        let build = |terms: &[String]| {
            let mut m = PhraseMatcher::new();
            for t in terms {
                m.insert(t, ());
            }
            m
        };
        Ok(LexiconClassifier {
            relevance: build(&lexicon.relevance_terms),
            bullish: build(&lexicon.bullish_terms),
            bearish: build(&lexicon.bearish_terms),
            mentions,
        })
    }

    pub fn classify(&self, text: &str) -> ClassifierVerdict {
        let tokens = tokenize(text);
        let relevant = self.relevance.count_matches(&tokens) > 0
            || self.mentions.as_ref().is_some_and(|m| !m.detect_tokens(&tokens).is_empty());
        if !relevant {
            return ClassifierVerdict::irrelevant(VerdictSource::Lexicon);
        }
        let bull = self.bullish.count_matches(&tokens);
        let bear = self.bearish.count_matches(&tokens);
        let raw = match bull.cmp(&bear) {
            std::cmp::Ordering::Greater => RawLabel::Bullish,
            std::cmp::Ordering::Less => RawLabel::Bearish,
            std::cmp::Ordering::Equal => RawLabel::Neutral,
        };
        ClassifierVerdict::relevant(raw, VerdictSource::Lexicon)
    }
}

impl Classifier for LexiconClassifier {
    fn classify_batch(&self, texts: &[&str]) -> Result<Vec<ClassifierVerdict>, SignalError> {
        Ok(texts.iter().map(|t| self.classify(t)).collect())
    }

    fn max_batch(&self) -> usize {
        256
    }
}

/// One-off classification of a single text without coin awareness.
pub fn lexicon_classify(text: &str, lexicon: &Lexicon) -> Result<ClassifierVerdict, SignalError> {
    Ok(LexiconClassifier::new(lexicon, None)?.classify(text))
}
