use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;
use std::path::Path;

use chrono::{DateTime, Duration, Utc};
use serde::{Deserialize, Serialize};

use super::NetError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InfluencerCriteria {
    pub min_followers: u64,
    pub min_avg_engagement: f64,
    /// Number of most recent tweets averaged for engagement.
    pub engagement_window: usize,
    pub activity_window_days: i64,
}

impl Default for InfluencerCriteria {
    fn default() -> Self {
        InfluencerCriteria {
            min_followers: 5000,
            min_avg_engagement: 200.0,
            engagement_window: 10,
            activity_window_days: 90,
        }
    }
}

impl InfluencerCriteria {
    pub fn validate(&self) -> Result<(), NetError> {
        if !(self.min_avg_engagement.is_finite() && self.min_avg_engagement >= 0.0) {
            return Err(NetError::Input(format!(
                "min_avg_engagement must be non-negative, got {}",
                self.min_avg_engagement
            )));
        }
        if self.engagement_window == 0 {
            return Err(NetError::Input("engagement_window must be at least 1".into()));
        }
        if self.activity_window_days < 0 {
            return Err(NetError::Input(format!(
                "activity_window_days must be non-negative, got {}",
                self.activity_window_days
            )));
        }
        Ok(())
    }
}

/// Profile data for one candidate account. `recent_engagements` is ordered
/// most recent first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub id: String,
    #[serde(default)]
    pub followers: Option<u64>,
    #[serde(default, with = "opt_utc")]
    pub last_tweet_at: Option<DateTime<Utc>>,
    #[serde(default)]
    pub recent_engagements: Option<Vec<f64>>,
    #[serde(default)]
    pub bio: Option<String>,
}

mod opt_utc {
    use chrono::{DateTime, Utc};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<DateTime<Utc>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(t) => s.serialize_some(&crate::corpus::format_utc(t)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<DateTime<Utc>>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| crate::corpus::parse_utc(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectionReason {
    MissingData,
    Followers,
    Inactivity,
    Engagement,
    Description,
}

impl RejectionReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectionReason::MissingData => "missing data",
            RejectionReason::Followers => "followers",
            RejectionReason::Inactivity => "inactivity",
            RejectionReason::Engagement => "engagement",
            RejectionReason::Description => "description",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct InfluencerSelection {
    pub accepted: BTreeSet<String>,
    pub rejected: BTreeMap<String, RejectionReason>,
}

/// Checks each candidate in the order followers, activity, engagement,
/// description and records the first failure. Candidates without a profile,
/// or with a field the next check needs missing, are rejected as missing data.
pub fn filter_influencers(
    candidates: &BTreeSet<String>,
    profiles: &BTreeMap<String, ProfileRecord>,
    criteria: &InfluencerCriteria,
    as_of: DateTime<Utc>,
    description_filter: impl Fn(&str) -> bool,
) -> Result<InfluencerSelection, NetError> {
    criteria.validate()?;
    let mut out = InfluencerSelection::default();
    for id in candidates {
        match check(profiles.get(id), criteria, as_of, &description_filter) {
            None => {
                out.accepted.insert(id.clone());
            }
            Some(reason) => {
                out.rejected.insert(id.clone(), reason);
            }
        }
    }
    Ok(out)
}

fn check(
    profile: Option<&ProfileRecord>,
    criteria: &InfluencerCriteria,
    as_of: DateTime<Utc>,
    description_filter: &impl Fn(&str) -> bool,
) -> Option<RejectionReason> {
    use RejectionReason::*;
    let Some(p) = profile else { return Some(MissingData) };
    let Some(followers) = p.followers else { return Some(MissingData) };
    if followers < criteria.min_followers {
        return Some(Followers);
    }
    let Some(last) = p.last_tweet_at else { return Some(MissingData) };
    if as_of - last > Duration::days(criteria.activity_window_days) {
        return Some(Inactivity);
    }
    let recent = match &p.recent_engagements {
        Some(v) if !v.is_empty() => &v[..v.len().min(criteria.engagement_window)],
        _ => return Some(MissingData),
    };
    let mean = recent.iter().sum::<f64>() / recent.len() as f64;
    if mean < criteria.min_avg_engagement {
        return Some(Engagement);
    }
    let Some(bio) = &p.bio else { return Some(MissingData) };
    if !description_filter(bio) {
        return Some(Description);
    }
    None
}

/// Reads profile records, one JSON object per line. Blank lines are skipped.
pub fn load_profiles(path: &Path) -> Result<BTreeMap<String, ProfileRecord>, NetError> {
    let file = std::fs::File::open(path).map_err(|e| NetError::Io(format!("{}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| NetError::Io(format!("{}: {e}", path.display())))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ProfileRecord = serde_json::from_str(&line)
            .map_err(|e| NetError::Input(format!("{} line {}: {e}", path.display(), i + 1)))?;
        if out.contains_key(&rec.id) {
            return Err(NetError::Input(format!("{} line {}: duplicate profile {}", path.display(), i + 1, rec.id)));
        }
        out.insert(rec.id.clone(), rec);
    }
    Ok(out)
}

/// One node id per line; blank lines and `#` comments are ignored.
pub fn parse_candidate_list(raw: &str) -> BTreeSet<String> {
    raw.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

pub fn read_candidate_list(path: &Path) -> Result<BTreeSet<String>, NetError> {
    let raw = std::fs::read_to_string(path).map_err(|e| NetError::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_candidate_list(&raw))
}
