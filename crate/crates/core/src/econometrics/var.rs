//! Bivariate VAR(k), fit equation by equation.

use serde::Serialize;

use super::ols::{ols_fit, Design, OlsFit};
use super::EconError;

/// Builds `target[t] ~ 1 + own[t-1..=t-k] (+ cross[t-1..=t-k])` for
/// `t = k..n`. Every variant uses the same `n - k` rows.
pub(crate) fn lagged_regression(
    target: &[f64],
    own: &[f64],
    cross: Option<&[f64]>,
    k: usize,
) -> (Vec<f64>, Design) {
    let n = target.len();
    let cols = 1 + k + if cross.is_some() { k } else { 0 };
    let mut design = Design::zeros(n - k, cols);
    let mut y = Vec::with_capacity(n - k);
    for (r, t) in (k..n).enumerate() {
        y.push(target[t]);
        design.set(r, 0, 1.0);
        for j in 1..=k {
            design.set(r, j, own[t - j]);
            if let Some(c) = cross {
                design.set(r, k + j, c[t - j]);
            }
        }
    }
    (y, design)
}

/// Smallest series length that leaves residual degrees of freedom for the
/// unrestricted `2k + 1` parameter equation: `n - k > 2k + 2`.
pub fn min_length(k: usize) -> usize {
    3 * k + 3
}

pub(crate) fn check_pair(x: &[f64], y: &[f64], k: usize) -> Result<(), EconError> {
    if k == 0 {
        return Err(EconError::Input("lag order must be at least 1".into()));
    }
    if x.len() != y.len() {
        return Err(EconError::Input(format!("series lengths differ: {} vs {}", x.len(), y.len())));
    }
    if x.len() < min_length(k) {
        return Err(EconError::TooShort { n: x.len(), min: min_length(k), lag: k });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarEquation {
    pub intercept: f64,
    /// Coefficients on the equation's own lags 1..=k.
    pub own_lags: Vec<f64>,
    /// Coefficients on the other series' lags 1..=k.
    pub cross_lags: Vec<f64>,
    pub residuals: Vec<f64>,
    pub ssr: f64,
    pub std_errors: Vec<f64>,
}

impl VarEquation {
    fn from_fit(fit: OlsFit, k: usize) -> Self {
        let std_errors = fit.std_errors();
        let c = &fit.coefficients;
        VarEquation {
            intercept: c[0],
            own_lags: c[1..=k].to_vec(),
            cross_lags: c[k + 1..=2 * k].to_vec(),
            residuals: fit.residuals,
            ssr: fit.ssr,
            std_errors,
        }
    }
}

/// `y_t = α + Σ β_i y_{t-i} + Σ γ_i x_{t-i} + ε_t` and
/// `x_t = δ + Σ φ_i x_{t-i} + Σ ψ_i y_{t-i} + η_t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarModel {
    pub lag: usize,
    pub equation_y: VarEquation,
    pub equation_x: VarEquation,
    pub n_obs: usize,
}

pub fn fit_var_pair(x: &[f64], y: &[f64], k: usize) -> Result<VarModel, EconError> {
    check_pair(x, y, k)?;
    let (ty, dy) = lagged_regression(y, y, Some(x), k);
    let (tx, dx) = lagged_regression(x, x, Some(y), k);
    let equation_y = VarEquation::from_fit(ols_fit(&ty, &dy)?, k);
    let equation_x = VarEquation::from_fit(ols_fit(&tx, &dx)?, k);
    Ok(VarModel { lag: k, equation_y, equation_x, n_obs: x.len() - k })
}
