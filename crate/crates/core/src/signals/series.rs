use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::aggregate::SignalCounts;
use super::SignalError;
use crate::corpus::Resolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalVariant {
    /// Coin-level counts only.
    Plain,
    /// Coin-level counts plus market-level (no coin mentioned) counts.
    WithMarket,
}

/// `(1 + n_buy) / (1 + n_not_buy)`.
pub fn social_signal(counts: &SignalCounts<'_>) -> f64 {
    (1.0 + f64::from(counts.n_buy)) / (1.0 + f64::from(counts.n_not_buy))
}

/// `(1 + n_buy + market_buy) / (1 + n_not_buy + market_not_buy)`.
pub fn social_signal_with_market(coin: &SignalCounts<'_>, market: &SignalCounts<'_>) -> Result<f64, SignalError> {
    if coin.window_end != market.window_end {
        return Err(SignalError::Input(format!(
            "window mismatch: coin window ends {} but market window ends {}",
            coin.window_end, market.window_end
        )));
    }
    let buy = 1.0 + f64::from(coin.n_buy) + f64::from(market.n_buy);
    let not_buy = 1.0 + f64::from(coin.n_not_buy) + f64::from(market.n_not_buy);
    Ok(buy / not_buy)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SocialSignalSeries {
    pub coin_id: String,
    pub variant: SignalVariant,
    /// Window end of `values[0]`.
    pub origin: DateTime<Utc>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReturnBase {
    Price,
    SocialSignal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    pub base: ReturnBase,
    pub coin_id: String,
    pub resolution: Resolution,
    /// Timestamp of the bucket holding `values[0]` (the second source point).
    pub origin: DateTime<Utc>,
    pub values: Vec<f64>,
}

impl ReturnSeries {
    pub fn from_levels(
        base: ReturnBase,
        coin_id: &str,
        resolution: Resolution,
        level_origin: DateTime<Utc>,
        levels: &[f64],
    ) -> Result<Self, SignalError> {
        Ok(ReturnSeries {
            base,
            coin_id: coin_id.to_owned(),
            resolution,
            origin: resolution.advance(level_origin, 1),
            values: log_returns(levels)?,
        })
    }
}

/// `ln(v[t] / v[t-1])` for `t = 1..n`.
pub fn log_returns(values: &[f64]) -> Result<Vec<f64>, SignalError> {
    if values.len() < 2 {
        return Err(SignalError::Input(format!("log returns need at least 2 values, got {}", values.len())));
    }
    if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(SignalError::Input(format!("non-positive value {} at index {i}", values[i])));
    }
    Ok(values.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_utc;

    fn c(n_buy: u32, n_not_buy: u32) -> SignalCounts<'static> {
        SignalCounts { coin_id: "X", window_end: parse_utc("2024-01-01T00:00:00Z").unwrap(), n_buy, n_not_buy }
    }

    #[test]
    fn plain_signal_examples() {
        assert_eq!(social_signal(&c(0, 0)), 1.0);
        assert_eq!(social_signal(&c(3, 1)), 2.0);
        assert_eq!(social_signal(&c(0, 9)), 0.1);
    }

    #[test]
    fn market_signal_examples() {
        assert_eq!(social_signal_with_market(&c(2, 1), &c(0, 0)).unwrap(), 1.5);
        assert_eq!(social_signal_with_market(&c(0, 0), &c(4, 9)).unwrap(), 0.5);
        assert_eq!(social_signal_with_market(&c(3, 1), &c(1, 1)).unwrap(), 5.0 / 3.0);
    }

    #[test]
    fn market_window_mismatch() {
        let mut m = c(0, 0);
        m.window_end = parse_utc("2024-01-01T01:00:00Z").unwrap();
        assert!(social_signal_with_market(&c(1, 1), &m).is_err());
    }

    #[test]
    fn log_return_examples() {
        assert_eq!(log_returns(&[5.0, 5.0, 5.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(log_returns(&[1.0, std::f64::consts::E]).unwrap(), vec![1.0]);
        assert!((log_returns(&[4.0, 8.0]).unwrap()[0] - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn log_return_errors() {
        let err = log_returns(&[1.0, 0.0, 2.0]).unwrap_err().to_string();
        assert!(err.contains("index 1"), "{err}");
        assert!(log_returns(&[1.0]).is_err());
    }
}
