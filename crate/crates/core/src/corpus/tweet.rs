use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use super::CorpusError;

/// Who published a tweet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuthorClass {
    Influencer,
    News,
}

impl AuthorClass {
    pub const ALL: [AuthorClass; 2] = [AuthorClass::Influencer, AuthorClass::News];

    pub fn as_str(self) -> &'static str {
        match self {
            AuthorClass::Influencer => "influencer",
            AuthorClass::News => "news",
        }
    }
}

impl fmt::Display for AuthorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AuthorClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "influencer" => Ok(AuthorClass::Influencer),
            "news" => Ok(AuthorClass::News),
            other => Err(format!("unknown author_class {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tweet {
    pub id: String,
    pub author_id: String,
    pub author_class: AuthorClass,
    #[serde(with = "rfc3339_secs")]
    pub created_at: DateTime<Utc>,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub followers: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engagement: Option<f64>,
    /// Author of the original post when this record is a retweet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retweeted_author_id: Option<String>,
}

mod rfc3339_secs {
    use chrono::{DateTime, SecondsFormat, Utc};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&t.to_rfc3339_opts(SecondsFormat::Secs, true))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
        let raw = String::deserialize(d)?;
        super::parse_utc(&raw).map_err(serde::de::Error::custom)
    }
}

/// Parses an RFC 3339 timestamp and normalises it to UTC at second precision.
pub fn parse_utc(raw: &str) -> Result<DateTime<Utc>, String> {
    let parsed = DateTime::parse_from_rfc3339(raw.trim())
        .map_err(|e| format!("invalid RFC 3339 timestamp {raw:?}: {e}"))?
        .with_timezone(&Utc);
    if parsed.timestamp_subsec_nanos() != 0 {
        return Err(format!("timestamp {raw:?} has sub-second precision"));
    }
    Ok(parsed)
}

pub fn format_utc(t: &DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Why a line of `tweets.jsonl` was not accepted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum RejectReason {
    MissingField(String),
    InvalidValue(String),
    MalformedJson(String),
    DuplicateId(String),
}

impl RejectReason {
    /// Short, stable reason name used in rejection reports.
    pub fn kind(&self) -> &'static str {
        match self {
            RejectReason::MissingField(_) => "missing field",
            RejectReason::InvalidValue(_) => "invalid value",
            RejectReason::MalformedJson(_) => "malformed json",
            RejectReason::DuplicateId(_) => "duplicate id",
        }
    }

    pub fn detail(&self) -> &str {
        match self {
            RejectReason::MissingField(s)
            | RejectReason::InvalidValue(s)
            | RejectReason::MalformedJson(s)
            | RejectReason::DuplicateId(s) => s,
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind(), self.detail())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    /// 1-based line number in the source file.
    pub line: usize,
    pub reason: RejectReason,
}

/// An immutable, validated set of tweets in file order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    tweets: Vec<Tweet>,
}

impl Corpus {
    /// Builds a corpus from already-validated tweets; ids must be unique.
    pub fn new(tweets: Vec<Tweet>) -> Result<Self, CorpusError> {
        let mut seen = HashSet::with_capacity(tweets.len());
        for t in &tweets {
            if !seen.insert(t.id.as_str()) {
                return Err(CorpusError::Invalid(format!("duplicate tweet id {:?}", t.id)));
            }
        }
        Ok(Corpus { tweets })
    }

    pub fn tweets(&self) -> &[Tweet] {
        &self.tweets
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Tweet> {
        self.tweets.iter()
    }

    /// Earliest and latest `created_at`, if any.
    pub fn span(&self) -> Option<(DateTime<Utc>, DateTime<Utc>)> {
        let min = self.tweets.iter().map(|t| t.created_at).min()?;
        let max = self.tweets.iter().map(|t| t.created_at).max()?;
        Some((min, max))
    }
}

#[derive(Debug, Clone, Default)]
pub struct LoadReport {
    pub corpus: Corpus,
    pub rejections: Vec<Rejection>,
}

#[derive(Deserialize)]
struct RawTweet {
    id: Option<serde_json::Value>,
    author_id: Option<serde_json::Value>,
    author_class: Option<String>,
    created_at: Option<String>,
    text: Option<String>,
    followers: Option<serde_json::Value>,
    engagement: Option<serde_json::Value>,
    retweeted_author_id: Option<String>,
}

fn id_text(field: &str, v: Option<serde_json::Value>) -> Result<String, RejectReason> {
    match v {
        None | Some(serde_json::Value::Null) => Err(RejectReason::MissingField(field.to_owned())),
        Some(serde_json::Value::String(s)) if !s.is_empty() => Ok(s),
        Some(other) => Err(RejectReason::InvalidValue(format!("{field} must be non-empty text, got {other}"))),
    }
}

fn validate(raw: RawTweet) -> Result<Tweet, RejectReason> {
    let id = id_text("id", raw.id)?;
    let author_id = id_text("author_id", raw.author_id)?;
    let author_class = raw
        .author_class
        .ok_or_else(|| RejectReason::MissingField("author_class".into()))?
        .parse::<AuthorClass>()
        .map_err(RejectReason::InvalidValue)?;
    let created_at = raw
        .created_at
        .ok_or_else(|| RejectReason::MissingField("created_at".into()))
        .and_then(|s| parse_utc(&s).map_err(RejectReason::InvalidValue))?;
    let text = raw.text.ok_or_else(|| RejectReason::MissingField("text".into()))?;
    let followers = match raw.followers {
        None | Some(serde_json::Value::Null) => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| {
            RejectReason::InvalidValue(format!("followers must be a non-negative integer, got {v}"))
        })?),
    };
    let engagement = match raw.engagement {
        None | Some(serde_json::Value::Null) => None,
        Some(v) => match v.as_f64() {
            Some(x) if x.is_finite() && x >= 0.0 => Some(x),
            _ => {
                return Err(RejectReason::InvalidValue(format!(
                    "engagement must be a non-negative number, got {v}"
                )))
            }
        },
    };
    Ok(Tweet {
        id,
        author_id,
        author_class,
        created_at,
        text,
        followers,
        engagement,
        retweeted_author_id: raw.retweeted_author_id.filter(|s| !s.is_empty()),
    })
}

/// Parses JSONL tweets. Malformed lines are skipped and reported; only I/O
/// failures abort.
pub fn parse_tweets<R: BufRead>(reader: R) -> Result<LoadReport, CorpusError> {
    let mut tweets = Vec::new();
    let mut rejections = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| CorpusError::Io { path: None, source: e })?;
        if line.trim().is_empty() {
            continue;
        }
        let outcome = serde_json::from_str::<RawTweet>(&line)
            .map_err(|e| RejectReason::MalformedJson(e.to_string()))
            .and_then(validate);
        match outcome {
            Ok(tweet) => {
                if seen.contains(&tweet.id) {
                    rejections.push(Rejection { line: line_no, reason: RejectReason::DuplicateId(tweet.id) });
                } else {
                    seen.insert(tweet.id.clone());
                    tweets.push(tweet);
                }
            }
            Err(reason) => rejections.push(Rejection { line: line_no, reason }),
        }
    }
    Ok(LoadReport { corpus: Corpus { tweets }, rejections })
}

pub fn load_tweets(path: &Path) -> Result<LoadReport, CorpusError> {
    let file = File::open(path).map_err(|e| CorpusError::io(path, e))?;
    parse_tweets(BufReader::new(file)).map_err(|e| e.with_path(path))
}

/// Writes a corpus back out as JSONL in the same schema `load_tweets` reads.
pub fn write_tweets<W: Write>(corpus: &Corpus, mut out: W) -> std::io::Result<()> {
    for t in corpus.iter() {
        serde_json::to_writer(&mut out, t)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
