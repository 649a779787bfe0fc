//! Tweet classification, trailing-window signal counts, social-signal series
//! and log returns.

mod aggregate;
mod external;
mod label;
mod lexicon;
mod series;

use rayon::prelude::*;

pub use aggregate::{aggregate_signal_counts, HourGrid, Population, SignalCounts, SignalTable, MARKET, WINDOW_HOURS};
pub use external::{
    external_classify, ClassifyRequest, ClassifyResponse, ExternalClassifier, ExternalConfig, HttpTransport,
    Transport, TransportError, WireVerdict, TOKEN_ENV,
};
pub use label::{ClassifierVerdict, RawLabel, SignalLabel, VerdictSource};
pub use lexicon::{lexicon_classify, Lexicon, LexiconClassifier};
pub use series::{
    log_returns, social_signal, social_signal_with_market, ReturnBase, ReturnSeries, SignalVariant, SocialSignalSeries,
};

use crate::corpus::Corpus;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SignalError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Input(String),
    #[error("classifier unavailable for texts {}..{} after {retries} retries: {detail}", .range.0, .range.1)]
    Unavailable { range: (usize, usize), retries: u32, detail: String },
    #[error("classifier protocol error for texts {}..{}: {detail}", .range.0, .range.1)]
    Protocol { range: (usize, usize), detail: String },
}

impl SignalError {
    fn shifted(self, offset: usize) -> Self {
        match self {
            SignalError::Unavailable { range, retries, detail } => {
                SignalError::Unavailable { range: (range.0 + offset, range.1 + offset), retries, detail }
            }
            SignalError::Protocol { range, detail } => {
                SignalError::Protocol { range: (range.0 + offset, range.1 + offset), detail }
            }
            other => other,
        }
    }
}

/// Anything that can label a batch of texts, one verdict per text in order.
pub trait Classifier: Sync {
    fn classify_batch(&self, texts: &[&str]) -> Result<Vec<ClassifierVerdict>, SignalError>;

    /// Largest batch `classify_batch` accepts.
    fn max_batch(&self) -> usize;
}

/// Classifies every tweet, splitting the corpus into batches that run on the
/// current rayon pool. Output order matches corpus order; the first failing
/// batch (in corpus order) is reported with corpus-level indices.
pub fn classify_corpus(corpus: &Corpus, classifier: &dyn Classifier) -> Result<Vec<ClassifierVerdict>, SignalError> {
    let texts: Vec<&str> = corpus.iter().map(|t| t.text.as_str()).collect();
    let batch = classifier.max_batch().max(1);
    let results: Vec<Result<Vec<ClassifierVerdict>, SignalError>> = texts
        .par_chunks(batch)
        .enumerate()
        .map(|(i, chunk)| classifier.classify_batch(chunk).map_err(|e| e.shifted(i * batch)))
        .collect();
    let mut out = Vec::with_capacity(texts.len());
    for r in results {
        let verdicts = r?;
        out.extend(verdicts);
    }
    if out.len() != texts.len() {
        return Err(SignalError::Protocol {
            range: (0, texts.len()),
            detail: format!("classifier returned {} verdicts for {} texts", out.len(), texts.len()),
        });
    }
    Ok(out)
}
