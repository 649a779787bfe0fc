use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ols::ols_fit;
use super::special::f_pvalue;
use super::var::{check_pair, lagged_regression};
use super::EconError;

/// Unrestricted SSR at or below this fraction of the effect's total sum of
/// squares is treated as a perfect fit.
pub const PERFECT_FIT_TOL: f64 = 1e-20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrangerResult {
    pub lag: usize,
    /// `+inf` when the unrestricted model fits perfectly.
    pub f_statistic: f64,
    pub p_value: f64,
    pub n_obs: usize,
    pub df_num: usize,
    pub df_den: usize,
    pub ssr_restricted: f64,
    pub ssr_unrestricted: f64,
    pub degenerate: bool,
}

/// Does `cause` help predict `effect` beyond `effect`'s own `k` lags?
///
/// Restricted: effect on intercept and its own lags. Unrestricted: adds `k`
/// lags of `cause`. Both use the same `n - k` rows and
/// `F = ((SSR_r - SSR_u)/k) / (SSR_u/(n - k - 2k - 1))`.
pub fn granger_test(cause: &[f64], effect: &[f64], k: usize) -> Result<GrangerResult, EconError> {
    check_pair(cause, effect, k)?;
    let (y, unrestricted) = lagged_regression(effect, effect, Some(cause), k);
    let (_, restricted) = lagged_regression(effect, effect, None, k);
    let fit_u = ols_fit(&y, &unrestricted)?;
    let fit_r = ols_fit(&y, &restricted)?;
    let n_obs = y.len();
    let df_num = k;
    let df_den = n_obs - 2 * k - 1;
    let mean = y.iter().sum::<f64>() / n_obs as f64;
    let tss: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
    let (ssr_r, ssr_u) = (fit_r.ssr, fit_u.ssr);

    if ssr_u <= PERFECT_FIT_TOL * tss {
        return Ok(GrangerResult {
            lag: k,
            f_statistic: f64::INFINITY,
            p_value: 0.0,
            n_obs,
            df_num,
            df_den,
            ssr_restricted: ssr_r,
            ssr_unrestricted: ssr_u,
            degenerate: true,
        });
    }
    // nested models: SSR_r >= SSR_u up to rounding
    let f = (((ssr_r - ssr_u) / df_num as f64) / (ssr_u / df_den as f64)).max(0.0);
    Ok(GrangerResult {
        lag: k,
        f_statistic: f,
        p_value: f_pvalue(f, df_num, df_den)?,
        n_obs,
        df_num,
        df_den,
        ssr_restricted: ssr_r,
        ssr_unrestricted: ssr_u,
        degenerate: false,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrangerRow {
    pub lag: usize,
    pub outcome: Result<GrangerResult, EconError>,
}

/// Independent Granger tests for `k = 1..=max_lag`, sorted by `k`. A failure
/// at one lag is recorded on that row only.
pub fn granger_scan(cause: &[f64], effect: &[f64], max_lag: usize) -> Vec<GrangerRow> {
    (1..=max_lag)
        .into_par_iter()
        .map(|lag| GrangerRow { lag, outcome: granger_test(cause, effect, lag) })
        .collect()
}

/// Strictly increasing p-value thresholds in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SignificanceBands(Vec<f64>);

impl SignificanceBands {
    pub fn new(thresholds: Vec<f64>) -> Result<Self, EconError> {
        if thresholds.is_empty() {
            return Err(EconError::Input("at least one significance band is required".into()));
        }
        if thresholds.iter().any(|t| !(*t > 0.0 && *t < 1.0)) {
            return Err(EconError::Input(format!("significance bands must lie in (0, 1): {thresholds:?}")));
        }
        if thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(EconError::Input(format!("significance bands must be strictly increasing: {thresholds:?}")));
        }
        Ok(SignificanceBands(thresholds))
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.0
    }

    /// Tightest threshold `t` with `p < t`.
    pub fn band(&self, p: f64) -> Option<f64> {
        self.0.iter().copied().find(|&t| p < t)
    }

    /// Band label such as `<0.01`, or empty when no band applies.
    pub fn label(&self, p: f64) -> String {
        self.band(p).map(|t| format!("<{t}")).unwrap_or_default()
    }
}

impl Default for SignificanceBands {
    fn default() -> Self {
        SignificanceBands(vec![0.01, 0.05, 0.1])
    }
}

impl TryFrom<Vec<f64>> for SignificanceBands {
    type Error = EconError;

    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        SignificanceBands::new(v)
    }
}

impl From<SignificanceBands> for Vec<f64> {
    fn from(b: SignificanceBands) -> Self {
        b.0
    }
}
