use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Two-class trading signal: sell and neutral collapse into `NotBuy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalLabel {
    Buy,
    NotBuy,
}

impl SignalLabel {
    pub const ALL: [SignalLabel; 2] = [SignalLabel::Buy, SignalLabel::NotBuy];

    pub fn as_str(self) -> &'static str {
        match self {
            SignalLabel::Buy => "buy",
            SignalLabel::NotBuy => "not_buy",
        }
    }
}

impl fmt::Display for SignalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Three-class classifier output before collapsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RawLabel {
    Bullish,
    Bearish,
    Neutral,
}

impl RawLabel {
    pub fn collapse(self) -> SignalLabel {
        match self {
            RawLabel::Bullish => SignalLabel::Buy,
            RawLabel::Bearish | RawLabel::Neutral => SignalLabel::NotBuy,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RawLabel::Bullish => "bullish",
            RawLabel::Bearish => "bearish",
            RawLabel::Neutral => "neutral",
        }
    }
}

impl FromStr for RawLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bullish" => Ok(RawLabel::Bullish),
            "bearish" => Ok(RawLabel::Bearish),
            "neutral" => Ok(RawLabel::Neutral),
            other => Err(format!("unknown label {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictSource {
    Lexicon,
    External,
}

impl VerdictSource {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictSource::Lexicon => "lexicon",
            VerdictSource::External => "external",
        }
    }
}

/// Relevance plus collapsed label for one tweet. The label is present
/// exactly when the tweet is relevant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifierVerdict {
    relevant: bool,
    label: Option<SignalLabel>,
    source: VerdictSource,
    raw_label: Option<RawLabel>,
}

impl ClassifierVerdict {
    pub fn relevant(raw: RawLabel, source: VerdictSource) -> Self {
        ClassifierVerdict { relevant: true, label: Some(raw.collapse()), source, raw_label: Some(raw) }
    }

    pub fn irrelevant(source: VerdictSource) -> Self {
        ClassifierVerdict { relevant: false, label: None, source, raw_label: None }
    }

    pub fn is_relevant(&self) -> bool {
        self.relevant
    }

    pub fn label(&self) -> Option<SignalLabel> {
        self.label
    }

    pub fn raw_label(&self) -> Option<RawLabel> {
        self.raw_label
    }

    pub fn source(&self) -> VerdictSource {
        self.source
    }
}
