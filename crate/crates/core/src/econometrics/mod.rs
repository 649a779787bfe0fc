//! Least squares, distribution tails, unit-root tests, bivariate VAR and
//! Granger tests, and lagged correlations.
//!
//! Everything here is a pure function of its inputs.

mod adf;
mod granger;
mod matrix;
mod ols;
mod special;
mod var;
mod xcorr;

use serde::Serialize;

pub use adf::{adf_test, default_max_lag, AdfDecision, AdfLevel, AdfResult, MIN_LENGTH as ADF_MIN_LENGTH};
pub use granger::{granger_scan, granger_test, GrangerResult, GrangerRow, SignificanceBands, PERFECT_FIT_TOL};
pub use matrix::{return_correlation_matrix, AlignedSeries, ReturnCorrelationMatrix};
pub use ols::{ols_fit, Design, OlsFit};
pub use special::{f_pvalue, inc_beta, ln_beta, ln_gamma, pearson_pvalue, t_two_sided_pvalue};
pub use var::{fit_var_pair, min_length as var_min_length, VarEquation, VarModel};
pub use xcorr::{
    best_lag_scan, cross_correlation, cross_correlation_with, daily_means, pearson, BestLag, BestLagScan,
    CrossCorrelationSeries, MeanMode, ScanOptions, Transform,
};

#[derive(Debug, Clone, PartialEq, Serialize, thiserror::Error)]
pub enum EconError {
    #[error("{0}")]
    Input(String),
    #[error("collinear regressors: column {column} is a linear combination of earlier columns")]
    Collinear { column: usize },
    #[error("zero variance: {0}")]
    ZeroVariance(String),
    #[error("series of length {n} is too short for lag {lag}; need at least {min} observations")]
    TooShort { n: usize, min: usize, lag: usize },
    #[error("misaligned series: {0}")]
    Misaligned(String),
    #[error("non-stationary series: {0}")]
    NonStationary(String),
}
