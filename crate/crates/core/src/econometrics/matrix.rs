use chrono::{DateTime, Utc};
use serde::Serialize;

use super::adf::{adf_test, AdfLevel};
use super::special::pearson_pvalue;
use super::xcorr::pearson;
use super::EconError;
use crate::corpus::{format_utc, Resolution};

/// A return series tagged with its coin and the timestamp of its first value.
#[derive(Debug, Clone, Copy)]
pub struct AlignedSeries<'a> {
    pub coin: &'a str,
    pub origin: DateTime<Utc>,
    pub values: &'a [f64],
}

/// Zero-lag return correlations: hourly below the diagonal (`i > j`), weekly
/// above it (`i < j`), ones on the diagonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnCorrelationMatrix {
    pub coins: Vec<String>,
    pub values: Vec<Vec<f64>>,
    pub p_values: Vec<Vec<f64>>,
    /// Set when stationarity failures were accepted instead of raised.
    pub adf_override: bool,
    pub warnings: Vec<String>,
}

fn check_alignment(series: &[AlignedSeries<'_>], resolution: Resolution) -> Result<(), EconError> {
    let Some(first) = series.first() else { return Ok(()) };
    for s in series {
        if s.origin != first.origin || s.values.len() != first.values.len() {
            return Err(EconError::Misaligned(format!(
                "{} {} returns cover {} points from {}, expected {} points from {} (as {})",
                s.coin,
                resolution.as_str(),
                s.values.len(),
                format_utc(&s.origin),
                first.values.len(),
                format_utc(&first.origin),
                first.coin
            )));
        }
    }
    Ok(())
}

pub fn return_correlation_matrix(
    hourly: &[AlignedSeries<'_>],
    weekly: &[AlignedSeries<'_>],
    adf_override: bool,
) -> Result<ReturnCorrelationMatrix, EconError> {
    if hourly.len() != weekly.len() || hourly.iter().zip(weekly).any(|(h, w)| h.coin != w.coin) {
        return Err(EconError::Input("hourly and weekly series must list the same coins in the same order".into()));
    }
    check_alignment(hourly, Resolution::Hourly)?;
    check_alignment(weekly, Resolution::Weekly)?;

    let mut warnings = Vec::new();
    for (series, res) in [(hourly, Resolution::Hourly), (weekly, Resolution::Weekly)] {
        for s in series {
            let problem = match adf_test(s.values, None) {
                Ok(r) if r.rejects_at(AdfLevel::Five) => None,
                Ok(r) => Some(format!("ADF statistic {:.4} does not reject a unit root at 5%", r.statistic)),
                Err(e) => Some(format!("ADF test failed: {e}")),
            };
            if let Some(problem) = problem {
                let msg = format!("{} {} returns: {problem}", s.coin, res.as_str());
                if !adf_override {
                    return Err(EconError::NonStationary(msg));
                }
                warnings.push(msg);
            }
        }
    }

    let n = hourly.len();
    let mut values = vec![vec![0.0; n]; n];
    let mut p_values = vec![vec![0.0; n]; n];
    for i in 0..n {
        values[i][i] = 1.0;
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b) = if i > j { (hourly[i], hourly[j]) } else { (weekly[i], weekly[j]) };
            let r = pearson(a.values, b.values).map_err(|e| match e {
                EconError::ZeroVariance(_) => EconError::ZeroVariance(format!("returns of {} or {}", a.coin, b.coin)),
                other => other,
            })?;
            values[i][j] = r;
            p_values[i][j] = pearson_pvalue(r, a.values.len())?;
        }
    }
    Ok(ReturnCorrelationMatrix {
        coins: hourly.iter().map(|s| s.coin.to_owned()).collect(),
        values,
        p_values,
        adf_override,
        warnings,
    })
}
