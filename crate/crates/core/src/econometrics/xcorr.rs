//! Lagged cross-correlation and the best-lag scan over hourly and daily grids.

use serde::{Deserialize, Serialize};

use super::EconError;
use crate::corpus::Resolution;

/// Which means centre the two segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanMode {
    /// Means over the overlapping windows only; keeps `|γ| <= 1`.
    #[default]
    Overlap,
    /// Means over the full series, as the textbook formula is often printed.
    Global,
}

/// `γ(k) = Σ (x_{i+k} - x̄)(y_i - ȳ) / (sqrt Σ (x_{i+k} - x̄)^2 · sqrt Σ (y_i - ȳ)^2)`
/// over `i = 0..n-k`. Positive `k` pairs `y_i` with the later `x_{i+k}`,
/// i.e. `y` leads `x` by `k` steps.
pub fn cross_correlation(x: &[f64], y: &[f64], k: usize) -> Result<f64, EconError> {
    cross_correlation_with(x, y, k, MeanMode::Overlap)
}

pub fn cross_correlation_with(x: &[f64], y: &[f64], k: usize, mode: MeanMode) -> Result<f64, EconError> {
    let n = x.len();
    if y.len() != n {
        return Err(EconError::Input(format!("series lengths differ: {} vs {}", n, y.len())));
    }
    if n < k + 3 {
        return Err(EconError::Input(format!("lag {k} leaves fewer than 3 overlapping points (n = {n})")));
    }
    let xs = &x[k..];
    let ys = &y[..n - k];
    let (mx, my) = match mode {
        MeanMode::Overlap => (mean(xs), mean(ys)),
        MeanMode::Global => (mean(x), mean(y)),
    };
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in xs.iter().zip(ys) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 || overlap_constant(xs) || overlap_constant(ys) {
        return Err(EconError::ZeroVariance(format!("overlap segment at lag {k}")));
    }
    let g = sxy / (sxx.sqrt() * syy.sqrt());
    Ok(match mode {
        MeanMode::Overlap => g.clamp(-1.0, 1.0),
        MeanMode::Global => g,
    })
}

fn overlap_constant(v: &[f64]) -> bool {
    v.iter().all(|&a| a == v[0])
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Pearson correlation of two equal-length vectors.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, EconError> {
    cross_correlation(x, y, 0)
}

/// Correlations at lags `0..=max_lag` for one resolution, with the lag that
/// maximises `|γ|` (smallest lag on ties).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCorrelationSeries {
    pub resolution: Resolution,
    pub values: Vec<(usize, Result<f64, EconError>)>,
    pub best: Option<(usize, f64)>,
}

impl CrossCorrelationSeries {
    pub fn compute(x: &[f64], y: &[f64], max_lag: usize, resolution: Resolution, mode: MeanMode) -> Self {
        let values: Vec<(usize, Result<f64, EconError>)> =
            (0..=max_lag).map(|k| (k, cross_correlation_with(x, y, k, mode))).collect();
        let mut best: Option<(usize, f64)> = None;
        for (k, g) in &values {
            if let Ok(g) = g {
                if best.is_none_or(|(_, b)| g.abs() > b.abs()) {
                    best = Some((*k, *g));
                }
            }
        }
        CrossCorrelationSeries { resolution, values, best }
    }
}

/// How a level series enters a correlation: as levels or as log returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Level,
    LogReturn,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestLag {
    pub resolution: Resolution,
    pub lag: usize,
    pub gamma: f64,
}

impl BestLag {
    /// `2H`, `6D`, …
    pub fn label(&self) -> String {
        let unit = match self.resolution {
            Resolution::Hourly => 'H',
            Resolution::Daily => 'D',
            Resolution::Weekly => 'W',
        };
        format!("{}{unit}", self.lag)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestLagScan {
    pub hourly: CrossCorrelationSeries,
    pub daily: CrossCorrelationSeries,
    pub best: Option<BestLag>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub hourly_max: usize,
    pub daily_max: usize,
    pub mode: MeanMode,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { hourly_max: 24, daily_max: 7, mode: MeanMode::Overlap }
    }
}

/// Daily means of an hourly series that starts at UTC midnight; a trailing
/// partial day is dropped.
pub fn daily_means(hourly: &[f64]) -> Vec<f64> {
    hourly.chunks_exact(24).map(|c| c.iter().sum::<f64>() / 24.0).collect()
}

fn transform(levels: &[f64], t: Transform) -> Result<Vec<f64>, EconError> {
    match t {
        Transform::Level => Ok(levels.to_vec()),
        Transform::LogReturn => {
            crate::signals::log_returns(levels).map_err(|e| EconError::Input(e.to_string()))
        }
    }
}

/// Correlates price (at `t`) with the signal (at `t - lag`) over hourly lags
/// and over daily lags of day-mean series.
///
/// Both inputs are hourly levels on the same grid starting at UTC midnight.
/// Returns are taken after resampling, so daily returns are log returns of
/// daily means.
pub fn best_lag_scan(
    price_hourly: &[f64],
    signal_hourly: &[f64],
    price_form: Transform,
    signal_form: Transform,
    options: ScanOptions,
) -> Result<BestLagScan, EconError> {
    if price_hourly.len() != signal_hourly.len() {
        return Err(EconError::Input(format!(
            "price and signal grids differ: {} vs {} hours",
            price_hourly.len(),
            signal_hourly.len()
        )));
    }
    let hp = transform(price_hourly, price_form)?;
    let hs = transform(signal_hourly, signal_form)?;
    let (hp, hs) = align(hp, hs);
    let hourly = CrossCorrelationSeries::compute(&hp, &hs, options.hourly_max, Resolution::Hourly, options.mode);

    let dp = transform(&daily_means(price_hourly), price_form)?;
    let ds = transform(&daily_means(signal_hourly), signal_form)?;
    let (dp, ds) = align(dp, ds);
    let daily = CrossCorrelationSeries::compute(&dp, &ds, options.daily_max, Resolution::Daily, options.mode);

    let mut best: Option<BestLag> = None;
    for series in [&hourly, &daily] {
        if let Some((lag, gamma)) = series.best {
            if best.as_ref().is_none_or(|b| gamma.abs() > b.gamma.abs()) {
                best = Some(BestLag { resolution: series.resolution, lag, gamma });
            }
        }
    }
    Ok(BestLagScan { hourly, daily, best })
}

/// Level and return series of one grid differ in length by one; drop the
/// leading level so both end on the same bucket.
fn align(a: Vec<f64>, b: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    let n = a.len().min(b.len());
    (a[a.len() - n..].to_vec(), b[b.len() - n..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wave(n: usize) -> Vec<f64> {
        (0..n).map(|i| (i as f64 * 0.37).sin() + 0.3 * (i as f64 * 1.91).cos()).collect()
    }

    #[test]
    fn self_and_negated() {
        let x = wave(50);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((cross_correlation(&x, &x, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!((cross_correlation(&x, &neg, 0).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn lag_direction() {
        // y leads x by 3: x_{i+3} = y_i
        let y = wave(80);
        let mut x = vec![0.0; 80];
        x[3..].copy_from_slice(&y[..77]);
        let g = cross_correlation(&x, &y, 3).unwrap();
        assert!((g - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_variance_and_short() {
        let x = wave(10);
        let c = vec![1.0; 10];
        assert!(matches!(cross_correlation(&x, &c, 0), Err(EconError::ZeroVariance(_))));
        assert!(cross_correlation(&x, &x, 8).is_err());
        assert!(cross_correlation(&x, &x[..9], 0).is_err());
    }

    #[test]
    fn global_means_can_leave_unit_interval() {
        let x = [0.0, 0.0, 0.0, 10.0, 10.0, 10.1, 10.2];
        let y = [10.0, 10.1, 10.2, 0.0, 0.0, 0.0, 0.0];
        let g = cross_correlation_with(&x, &y, 3, MeanMode::Global).unwrap();
        let o = cross_correlation_with(&x, &y, 3, MeanMode::Overlap).unwrap();
        assert!(o.abs() <= 1.0);
        assert!(g.is_finite());
    }

    #[test]
    fn signal_equal_to_price() {
        let p: Vec<f64> = wave(24 * 10).iter().map(|v| 3.0 + v).collect();
        let scan = best_lag_scan(&p, &p, Transform::Level, Transform::Level, ScanOptions::default()).unwrap();
        let best = scan.best.unwrap();
        assert_eq!((best.resolution, best.lag), (Resolution::Hourly, 0));
        assert!((best.gamma - 1.0).abs() < 1e-12);
        assert_eq!(best.label(), "0H");
        assert_eq!(scan.hourly.values.len(), 25);
        assert_eq!(scan.daily.values.len(), 8);
    }
}
