//! Augmented Dickey-Fuller unit-root test, constant but no trend.

use serde::Serialize;

use super::ols::{ols_fit, Design};
use super::EconError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum AdfLevel {
    #[serde(rename = "1%")]
    One,
    #[serde(rename = "5%")]
    Five,
    #[serde(rename = "10%")]
    Ten,
}

impl AdfLevel {
    pub const ALL: [AdfLevel; 3] = [AdfLevel::One, AdfLevel::Five, AdfLevel::Ten];

    pub fn as_str(self) -> &'static str {
        match self {
            AdfLevel::One => "1%",
            AdfLevel::Five => "5%",
            AdfLevel::Ten => "10%",
        }
    }

    /// MacKinnon (2010) response-surface coefficients for the constant-only
    /// case: `cv = b0 + b1/T + b2/T^2 + b3/T^3`.
    fn surface(self) -> [f64; 4] {
        match self {
            AdfLevel::One => [-3.43035, -6.5393, -16.786, -79.433],
            AdfLevel::Five => [-2.86154, -2.8903, -4.234, -40.040],
            AdfLevel::Ten => [-2.56677, -1.5384, -2.809, 0.0],
        }
    }

    pub fn critical_value(self, n_obs: usize) -> f64 {
        let t = 1.0 / n_obs as f64;
        let [b0, b1, b2, b3] = self.surface();
        b0 + b1 * t + b2 * t * t + b3 * t * t * t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdfDecision {
    pub level: AdfLevel,
    pub critical_value: f64,
    pub reject: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdfResult {
    pub statistic: f64,
    pub chosen_lag: usize,
    pub max_lag: usize,
    pub n_obs: usize,
    pub decisions: [AdfDecision; 3],
}

impl AdfResult {
    pub fn rejects_at(&self, level: AdfLevel) -> bool {
        self.decisions.iter().any(|d| d.level == level && d.reject)
    }
}

pub const MIN_LENGTH: usize = 25;

/// Schwert's rule `floor(12 (n/100)^(1/4))`.
pub fn default_max_lag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Regression `Δv_t = c + ρ v_{t-1} + Σ_{j=1..p} λ_j Δv_{t-j}` over the rows
/// whose diff index runs from `first` to the end.
fn adf_regression(levels: &[f64], diffs: &[f64], lags: usize, first: usize) -> Result<super::ols::OlsFit, EconError> {
    let rows = diffs.len() - first;
    let mut design = Design::zeros(rows, lags + 2);
    let mut y = Vec::with_capacity(rows);
    for (r, t) in (first..diffs.len()).enumerate() {
        y.push(diffs[t]);
        design.set(r, 0, 1.0);
        design.set(r, 1, levels[t]);
        for j in 1..=lags {
            design.set(r, j + 1, diffs[t - j]);
        }
    }
    ols_fit(&y, &design)
}

/// Tests for a unit root; rejection means the series looks stationary.
/// The lag order minimises AIC over `0..=max_lag` on a common sample and the
/// chosen model is refit on all rows it can use.
pub fn adf_test(series: &[f64], max_lag: Option<usize>) -> Result<AdfResult, EconError> {
    let n = series.len();
    if n < MIN_LENGTH {
        return Err(EconError::Input(format!("ADF needs at least {MIN_LENGTH} observations, got {n}")));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(EconError::Input("ADF input contains non-finite values".into()));
    }
    let first = series[0];
    if series.iter().all(|&v| v == first) {
        return Err(EconError::ZeroVariance("ADF input series".into()));
    }
    let max_lag = max_lag.unwrap_or_else(|| default_max_lag(n));
    let diffs: Vec<f64> = series.windows(2).map(|w| w[1] - w[0]).collect();
    let common_rows = diffs.len().saturating_sub(max_lag);
    if common_rows <= max_lag + 2 + 1 {
        return Err(EconError::Input(format!(
            "series of length {n} is too short for ADF with max_lag {max_lag}"
        )));
    }

    let mut best: Option<(f64, usize)> = None;
    for p in 0..=max_lag {
        let fit = adf_regression(series, &diffs, p, max_lag)?;
        let m = fit.n_obs() as f64;
        let aic = m * (fit.ssr / m).ln() + 2.0 * (p + 2) as f64;
        if best.is_none_or(|(b, _)| aic < b) {
            best = Some((aic, p));
        }
    }
    let chosen_lag = best.expect("at least lag 0 evaluated").1;

    let fit = adf_regression(series, &diffs, chosen_lag, chosen_lag)?;
    let se = fit.std_errors();
    let statistic = fit.coefficients[1] / se[1];
    let n_obs = fit.n_obs();
    let decisions = AdfLevel::ALL.map(|level| {
        let cv = level.critical_value(n_obs);
        AdfDecision { level, critical_value: cv, reject: statistic < cv }
    });
    Ok(AdfResult { statistic, chosen_lag, max_lag, n_obs, decisions })
}
