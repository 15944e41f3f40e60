//! Performance measures over price / equity series.
//!
//! Standard deviations are population (N-divisor) throughout, and annualized
//! figures scale by `trading_days` (252 by default).

use alloc::vec::Vec;
use core::ops::Range;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::market::slice_years;
use crate::math::{powf, sqrt, window_mean, window_std};
use crate::{Error, Result};

/// Simple returns `v[i] / v[i-1] − 1`.
pub fn daily_returns(values: &[f64]) -> Result<Vec<f64>> {
    if values.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: values.len(),
        });
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::NonPositivePrice(i));
    }
    Ok(values.windows(2).map(|w| w[1] / w[0] - 1.0).collect())
}

/// Largest peak-to-trough loss as a fraction of the peak, in one pass.
pub fn max_drawdown(values: &[f64]) -> f64 {
    let mut peak = f64::NEG_INFINITY;
    let mut worst = 0.0f64;
    for &v in values {
        if v > peak {
            peak = v;
        } else {
            worst = worst.max((peak - v) / peak);
        }
    }
    worst
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    (window_mean(xs), window_std(xs))
}

fn annualized_ratio(excess_mean: f64, std: f64, trading_days: usize) -> Result<f64> {
    if std == 0.0 {
        return Err(Error::ZeroVolatility);
    }
    Ok(excess_mean / std * sqrt(trading_days as f64))
}

/// Annualized Sharpe ratio `(mean(r) − rf) / σ(r) · √trading_days`.
pub fn sharpe_annual(returns: &[f64], rf_daily: f64, trading_days: usize) -> Result<f64> {
    if returns.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: returns.len(),
        });
    }
    let (m, s) = mean_std(returns);
    annualized_ratio(m - rf_daily, s, trading_days)
}

/// Annualized information ratio of `returns` over `benchmark`.
pub fn information_ratio_annual(
    returns: &[f64],
    benchmark: &[f64],
    trading_days: usize,
) -> Result<f64> {
    if returns.len() != benchmark.len() {
        return Err(Error::LengthMismatch {
            left: returns.len(),
            right: benchmark.len(),
        });
    }
    if returns.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: returns.len(),
        });
    }
    let diff: Vec<f64> = returns.iter().zip(benchmark).map(|(r, b)| r - b).collect();
    let (m, s) = mean_std(&diff);
    annualized_ratio(m, s, trading_days)
}

/// Annualized volatility `σ(r) · √trading_days`.
pub fn volatility_annual(returns: &[f64], trading_days: usize) -> Result<f64> {
    if returns.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: returns.len(),
        });
    }
    Ok(mean_std(returns).1 * sqrt(trading_days as f64))
}

/// Normal fit of a return distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFit {
    pub mean: f64,
    pub std: f64,
}

pub fn gaussian_fit(returns: &[f64]) -> Result<GaussianFit> {
    if returns.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: returns.len(),
        });
    }
    let (mean, std) = mean_std(returns);
    Ok(GaussianFit { mean, std })
}

/// Ratio of the equity at the end of each range to the equity at the end of
/// the previous one (the first range is measured from `initial`).
pub fn yearly_rr(equity: &[f64], initial: f64, ranges: &[Range<usize>]) -> Vec<f64> {
    let mut prev = initial;
    ranges
        .iter()
        .map(|r| {
            let end = equity[r.end - 1];
            let rr = end / prev;
            prev = end;
            rr
        })
        .collect()
}

/// The full measure block for one backtest.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct MetricReport {
    pub initial_price: f64,
    pub final_price: f64,
    pub rr_whole: f64,
    #[cfg_attr(feature = "serde", serde(rename = "rr_per_year"))]
    pub rr_per_year_geometric: f64,
    pub rr_by_year: Vec<f64>,
    pub buy_count: usize,
    #[cfg_attr(feature = "serde", serde(rename = "max_rate"))]
    pub max_year_rr: f64,
    #[cfg_attr(feature = "serde", serde(rename = "min_rate"))]
    pub min_year_rr: f64,
    pub mdd: f64,
    /// `None` when the strategy returns have zero variance.
    #[cfg_attr(feature = "serde", serde(rename = "sr"))]
    pub sharpe_annual: Option<f64>,
    /// `None` when strategy and benchmark returns differ by a constant.
    #[cfg_attr(feature = "serde", serde(rename = "ir"))]
    pub ir_annual: Option<f64>,
    pub vol_annual: Option<f64>,
    pub return_fit_mean: Option<f64>,
    pub return_fit_std: Option<f64>,
}

impl MetricReport {
    /// Builds the report from an equity path (one value per bar) and the
    /// benchmark's closes over the same bars.
    pub fn compute(
        equity: &[f64],
        buy_count: usize,
        benchmark: &[f64],
        trading_days: usize,
    ) -> Result<Self> {
        if equity.is_empty() {
            return Err(Error::EmptySeries);
        }
        if equity.len() != benchmark.len() {
            return Err(Error::LengthMismatch {
                left: equity.len(),
                right: benchmark.len(),
            });
        }
        let trading_days = trading_days.max(1);
        let initial = equity[0];
        let last = equity[equity.len() - 1];
        let rr_whole = last / initial;
        let years = equity.len() as f64 / trading_days as f64;
        let rr_by_year = yearly_rr(equity, initial, &slice_years(equity.len(), trading_days));
        let max_year_rr = rr_by_year.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min_year_rr = rr_by_year.iter().copied().fold(f64::INFINITY, f64::min);

        let (returns, bench) = if equity.len() >= 2 {
            (daily_returns(equity)?, daily_returns(benchmark)?)
        } else {
            (Vec::new(), Vec::new())
        };
        let fit = gaussian_fit(&returns).ok();
        Ok(Self {
            initial_price: initial,
            final_price: last,
            rr_whole,
            rr_per_year_geometric: powf(rr_whole, 1.0 / years),
            rr_by_year,
            buy_count,
            max_year_rr,
            min_year_rr,
            mdd: max_drawdown(equity),
            sharpe_annual: sharpe_annual(&returns, 0.0, trading_days).ok(),
            ir_annual: information_ratio_annual(&returns, &bench, trading_days).ok(),
            vol_annual: volatility_annual(&returns, trading_days).ok(),
            return_fit_mean: fit.map(|f| f.mean),
            return_fit_std: fit.map(|f| f.std),
        })
    }
}
