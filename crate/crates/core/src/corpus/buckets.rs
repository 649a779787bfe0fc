use chrono::{DateTime, Duration, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use super::prices::PriceSeries;
use super::{Corpus, CorpusError};

const HOUR: i64 = 3_600;
const DAY: i64 = 24 * HOUR;
const WEEK: i64 = 7 * DAY;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resolution {
    Hourly,
    Daily,
    Weekly,
}

impl Resolution {
    pub fn seconds(self) -> i64 {
        match self {
            Resolution::Hourly => HOUR,
            Resolution::Daily => DAY,
            Resolution::Weekly => WEEK,
        }
    }

    pub fn hours(self) -> usize {
        (self.seconds() / HOUR) as usize
    }

    pub fn duration(self) -> Duration {
        Duration::seconds(self.seconds())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Resolution::Hourly => "hourly",
            Resolution::Daily => "daily",
            Resolution::Weekly => "weekly",
        }
    }

    /// Start of the bucket containing `t`: clock hour, UTC midnight, or
    /// Monday 00:00 UTC.
    pub fn floor(self, t: DateTime<Utc>) -> DateTime<Utc> {
        let secs = t.timestamp();
        let start = match self {
            Resolution::Hourly => secs.div_euclid(HOUR) * HOUR,
            Resolution::Daily => secs.div_euclid(DAY) * DAY,
            Resolution::Weekly => {
                // 1970-01-01 was a Thursday, three days after a Monday.
                let days = secs.div_euclid(DAY);
                (days - (days + 3).rem_euclid(7)) * DAY
            }
        };
        Utc.timestamp_opt(start, 0).single().expect("bucket start in range")
    }

    /// Smallest bucket boundary at or after `t`.
    pub fn ceil(self, t: DateTime<Utc>) -> DateTime<Utc> {
        let f = self.floor(t);
        if f == t {
            f
        } else {
            self.advance(f, 1)
        }
    }

    pub fn advance(self, t: DateTime<Utc>, steps: i64) -> DateTime<Utc> {
        t + Duration::seconds(self.seconds() * steps)
    }

    /// `floor((t - origin) / resolution)`; negative for events before `origin`.
    pub fn index(self, origin: DateTime<Utc>, t: DateTime<Utc>) -> i64 {
        (t.timestamp() - origin.timestamp()).div_euclid(self.seconds())
    }
}

/// A regular time grid with one aggregate value per bucket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketSeries {
    pub resolution: Resolution,
    pub origin: DateTime<Utc>,
    pub values: Vec<f64>,
}

impl BucketSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn bucket_start(&self, i: usize) -> DateTime<Utc> {
        self.resolution.advance(self.origin, i as i64)
    }

    pub fn end(&self) -> DateTime<Utc> {
        self.bucket_start(self.values.len())
    }
}

/// Tweet counts per bucket, with origin at the bucket containing the
/// earliest tweet. Every tweet lands in exactly one bucket.
pub fn count_tweets(corpus: &Corpus, resolution: Resolution) -> BucketSeries {
    let Some((first, last)) = corpus.span() else {
        return BucketSeries { resolution, origin: DateTime::<Utc>::UNIX_EPOCH, values: Vec::new() };
    };
    let origin = resolution.floor(first);
    let n = resolution.index(origin, last) as usize + 1;
    let mut values = vec![0.0; n];
    for t in corpus.iter() {
        values[resolution.index(origin, t.created_at) as usize] += 1.0;
    }
    BucketSeries { resolution, origin, values }
}

/// Mean price per daily or weekly bucket. Partial leading and trailing
/// buckets are dropped; a missing hour inside the span is an error.
pub fn resample_prices(series: &PriceSeries, resolution: Resolution) -> Result<BucketSeries, CorpusError> {
    if resolution == Resolution::Hourly {
        let (origin, values) = series.hourly_values()?;
        return Ok(BucketSeries { resolution, origin, values });
    }
    if let Some(&(from, to)) = series.gaps().first() {
        return Err(CorpusError::Gap { coin: series.coin_id.clone(), from, to });
    }
    let points = series.points();
    let Some(&(first, _)) = points.first() else {
        return Ok(BucketSeries { resolution, origin: DateTime::<Utc>::UNIX_EPOCH, values: Vec::new() });
    };
    let origin = resolution.ceil(first);
    let per_bucket = resolution.hours();
    let mut values = Vec::new();
    let start = points.iter().position(|&(t, _)| t >= origin).unwrap_or(points.len());
    for chunk in points[start..].chunks(per_bucket) {
        if chunk.len() < per_bucket {
            break;
        }
        let sum: f64 = chunk.iter().map(|&(_, p)| p).sum();
        values.push(sum / per_bucket as f64);
    }
    Ok(BucketSeries { resolution, origin, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str) -> DateTime<Utc> {
        super::super::tweet::parse_utc(s).unwrap()
    }

    #[test]
    fn weekly_floor_is_monday() {
        // 2024-01-03 is a Wednesday
        assert_eq!(Resolution::Weekly.floor(at("2024-01-03T15:20:00Z")), at("2024-01-01T00:00:00Z"));
        assert_eq!(Resolution::Weekly.floor(at("2024-01-01T00:00:00Z")), at("2024-01-01T00:00:00Z"));
        assert_eq!(Resolution::Weekly.floor(at("1969-12-31T00:00:00Z")), at("1969-12-29T00:00:00Z"));
        assert_eq!(Resolution::Daily.ceil(at("2024-01-03T15:20:00Z")), at("2024-01-04T00:00:00Z"));
        assert_eq!(Resolution::Hourly.ceil(at("2024-01-03T15:00:00Z")), at("2024-01-03T15:00:00Z"));
    }

    #[test]
    fn index_uses_floor_division() {
        let o = at("2024-01-01T00:00:00Z");
        assert_eq!(Resolution::Hourly.index(o, at("2024-01-01T00:59:59Z")), 0);
        assert_eq!(Resolution::Hourly.index(o, at("2024-01-01T01:00:00Z")), 1);
        assert_eq!(Resolution::Hourly.index(o, at("2023-12-31T23:59:59Z")), -1);
    }

    fn hourly(start: &str, prices: &[f64]) -> PriceSeries {
        let s = at(start);
        PriceSeries::new(
            "X",
            prices.iter().enumerate().map(|(i, &p)| (Resolution::Hourly.advance(s, i as i64), p)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn constant_two_weeks() {
        let s = hourly("2024-01-01T00:00:00Z", &[5.0; 336]);
        let w = resample_prices(&s, Resolution::Weekly).unwrap();
        assert_eq!(w.values, vec![5.0, 5.0]);
        assert_eq!(w.origin, at("2024-01-01T00:00:00Z"));
    }

    #[test]
    fn daily_mean_of_one_to_twenty_four() {
        let prices: Vec<f64> = (1..=24).map(f64::from).collect();
        let d = resample_prices(&hourly("2024-01-02T00:00:00Z", &prices), Resolution::Daily).unwrap();
        assert_eq!(d.values, vec![12.5]);
    }

    #[test]
    fn partial_buckets_dropped() {
        // starts at 22:00 and ends 03:00 two days later: only one full day
        let s = hourly("2024-01-01T22:00:00Z", &[1.0; 2 + 24 + 4]);
        let d = resample_prices(&s, Resolution::Daily).unwrap();
        assert_eq!(d.values.len(), 1);
        assert_eq!(d.origin, at("2024-01-02T00:00:00Z"));
    }

    #[test]
    fn gap_is_named() {
        let o = at("2024-01-01T00:00:00Z");
        let pts = vec![
            (o, 1.0),
            (Resolution::Hourly.advance(o, 1), 1.0),
            (Resolution::Hourly.advance(o, 4), 1.0),
        ];
        let s = PriceSeries::new("X", pts).unwrap();
        match resample_prices(&s, Resolution::Daily).unwrap_err() {
            CorpusError::Gap { from, to, .. } => {
                assert_eq!(from, at("2024-01-01T02:00:00Z"));
                assert_eq!(to, at("2024-01-01T03:00:00Z"));
            }
            e => panic!("unexpected {e}"),
        }
    }
}
