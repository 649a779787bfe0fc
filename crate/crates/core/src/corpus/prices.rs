use std::collections::BTreeMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use chrono::{DateTime, Timelike, Utc};

use super::buckets::Resolution;
use super::tweet::parse_utc;
use super::CorpusError;

/// Hourly closing prices for one coin. Timestamps are UTC hour boundaries,
/// strictly increasing; missing hours are represented as gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    pub coin_id: String,
    points: Vec<(DateTime<Utc>, f64)>,
}

impl PriceSeries {
    pub fn new(coin_id: &str, points: Vec<(DateTime<Utc>, f64)>) -> Result<Self, CorpusError> {
        for (i, &(t, p)) in points.iter().enumerate() {
            if t.minute() != 0 || t.second() != 0 {
                return Err(CorpusError::Invalid(format!("{coin_id}: timestamp {t} is not on an hour boundary")));
            }
            if !(p.is_finite() && p > 0.0) {
                return Err(CorpusError::Invalid(format!("{coin_id}: price at {t} must be positive, got {p}")));
            }
            if i > 0 && points[i - 1].0 >= t {
                return Err(CorpusError::Invalid(format!("{coin_id}: timestamps not strictly increasing at {t}")));
            }
        }
        Ok(PriceSeries { coin_id: coin_id.to_owned(), points })
    }

    pub fn points(&self) -> &[(DateTime<Utc>, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Missing hour ranges as inclusive `(first missing, last missing)` pairs.
    pub fn gaps(&self) -> Vec<(DateTime<Utc>, DateTime<Utc>)> {
        self.points
            .windows(2)
            .filter_map(|w| {
                let step = Resolution::Hourly.index(w[0].0, w[1].0);
                (step > 1).then(|| {
                    (Resolution::Hourly.advance(w[0].0, 1), Resolution::Hourly.advance(w[1].0, -1))
                })
            })
            .collect()
    }

    /// The series as a dense hourly vector. Fails on any gap.
    pub fn hourly_values(&self) -> Result<(DateTime<Utc>, Vec<f64>), CorpusError> {
        if let Some(&(from, to)) = self.gaps().first() {
            return Err(CorpusError::Gap { coin: self.coin_id.clone(), from, to });
        }
        let origin = self.points.first().map(|p| p.0).unwrap_or(DateTime::<Utc>::UNIX_EPOCH);
        Ok((origin, self.points.iter().map(|p| p.1).collect()))
    }

    /// Dense hourly prices for `[start, start + hours)`; every hour must exist.
    pub fn window(&self, start: DateTime<Utc>, hours: usize) -> Result<Vec<f64>, CorpusError> {
        let first = self.points.partition_point(|p| p.0 < start);
        let mut out = Vec::with_capacity(hours);
        for h in 0..hours {
            let want = Resolution::Hourly.advance(start, h as i64);
            match self.points.get(first + h) {
                Some(&(t, p)) if t == want => out.push(p),
                _ => {
                    let to = self.points.get(first + h).map(|p| Resolution::Hourly.advance(p.0, -1));
                    return Err(CorpusError::Gap {
                        coin: self.coin_id.clone(),
                        from: want,
                        to: to.unwrap_or_else(|| Resolution::Hourly.advance(start, hours as i64 - 1)),
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Reads `timestamp,coin,price` rows into one series per coin.
pub fn parse_prices<R: Read>(reader: R) -> Result<BTreeMap<String, PriceSeries>, CorpusError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| CorpusError::Invalid(format!("prices header: {e}")))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["timestamp", "coin", "price"] {
        return Err(CorpusError::Invalid(format!(
            "prices header must be `timestamp,coin,price`, got `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut by_coin: BTreeMap<String, Vec<(DateTime<Utc>, f64)>> = BTreeMap::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| CorpusError::Invalid(format!("prices line {line}: {e}")))?;
        let bad = |msg: String| CorpusError::Invalid(format!("prices line {line}: {msg}"));
        let t = parse_utc(&rec[0]).map_err(bad)?;
        let price: f64 = rec[2].parse().map_err(|e| bad(format!("price {:?}: {e}", &rec[2])))?;
        by_coin.entry(rec[1].to_owned()).or_default().push((t, price));
    }
    by_coin
        .into_iter()
        .map(|(coin, mut pts)| {
            pts.sort_by_key(|p| p.0);
            let series = PriceSeries::new(&coin, pts)?;
            Ok((coin, series))
        })
        .collect()
}

pub fn load_prices(path: &Path) -> Result<BTreeMap<String, PriceSeries>, CorpusError> {
    let file = File::open(path).map_err(|e| CorpusError::io(path, e))?;
    parse_prices(file).map_err(|e| e.with_path(path))
}
