//! Indicator kernels.
//!
//! Every kernel returns an output aligned 1:1 with its input. Leading entries
//! that cannot be fully formed are pass-through (or neutral) values, never NaN;
//! [`IndicatorSeries::warmup_len`] says how many there are.

mod bands;
mod ma;
mod momentum;

use alloc::vec::Vec;
use core::ops::Index;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use bands::{atr, bollinger, keltner, true_range, BandSet};
pub use ma::{ama, ama_effective_period, efficiency_ratio, ema, sma, ER_NOISE_FLOOR};
pub use momentum::{aroon, macd, rmi, rsi, AroonLines, MacdLines};

/// Default EMA smoothing factor `s` in `K = s / (N + 1)`.
pub const DEFAULT_SMOOTHING: f64 = 2.0;

/// Per-bar indicator output.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSeries {
    values: Vec<f64>,
    warmup_len: usize,
}

impl IndicatorSeries {
    pub(crate) fn new(values: Vec<f64>, warmup_len: usize) -> Self {
        let warmup_len = warmup_len.min(values.len());
        Self { values, warmup_len }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Number of leading seed / pass-through entries.
    pub fn warmup_len(&self) -> usize {
        self.warmup_len
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl Index<usize> for IndicatorSeries {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Which moving average an adaptive MA modulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(
    feature = "serde",
    derive(Serialize, Deserialize),
    serde(try_from = "u8", into = "u8")
)]
pub enum AmaType {
    /// Kaufman-style: squared scaled smoothing constant in an EMA recurrence (matype 1).
    Ema,
    /// Variable-period SMA with the period interpolated by |ER| (matype 2).
    Sma,
}

impl TryFrom<u8> for AmaType {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(AmaType::Ema),
            2 => Ok(AmaType::Sma),
            _ => Err(Error::InvalidParams("matype must be 1 (EMA) or 2 (SMA)")),
        }
    }
}

impl From<AmaType> for u8 {
    fn from(t: AmaType) -> u8 {
        match t {
            AmaType::Ema => 1,
            AmaType::Sma => 2,
        }
    }
}

/// Adaptive moving average parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AmaParams {
    /// Slow period N₁.
    pub long: usize,
    /// Fast period N₂.
    pub short: usize,
    /// Efficiency-ratio look-back (adaptive window length).
    pub ada_win: usize,
    pub matype: AmaType,
}

impl AmaParams {
    pub fn new(long: usize, short: usize, ada_win: usize, matype: AmaType) -> Result<Self> {
        let p = Self {
            long,
            short,
            ada_win,
            matype,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.short == 0 || self.long <= self.short {
            return Err(Error::InvalidParams("AMA periods need long > short >= 1"));
        }
        if self.ada_win == 0 {
            return Err(Error::InvalidParams("AMA adaptive window must be >= 1"));
        }
        Ok(())
    }
}

/// A moving-average choice, as used by strategies and band indicators.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(Serialize, Deserialize),
    serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum MaSpec {
    Sma {
        period: usize,
    },
    Ema {
        period: usize,
        #[cfg_attr(feature = "serde", serde(default = "default_smoothing"))]
        smoothing: f64,
    },
    Ama(AmaParams),
}

#[cfg(feature = "serde")]
fn default_smoothing() -> f64 {
    DEFAULT_SMOOTHING
}

impl MaSpec {
    pub fn sma(period: usize) -> Self {
        MaSpec::Sma { period }
    }

    pub fn ema(period: usize) -> Self {
        MaSpec::Ema {
            period,
            smoothing: DEFAULT_SMOOTHING,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MaSpec::Sma { period } => nonzero(period),
            MaSpec::Ema { period, smoothing } => {
                nonzero(period)?;
                check_smoothing(smoothing)
            }
            MaSpec::Ama(p) => p.validate(),
        }
    }

    /// The plain period, or N₁ for adaptive averages. Used wherever a
    /// companion window (ATR, band σ) is tied to the average's period.
    pub fn period(&self) -> usize {
        match *self {
            MaSpec::Sma { period } | MaSpec::Ema { period, .. } => period,
            MaSpec::Ama(p) => p.long,
        }
    }

    /// Leading entries of [`MaSpec::apply`] output that are seeds or pass-through.
    pub fn warmup_len(&self) -> usize {
        match *self {
            MaSpec::Sma { period } => period.saturating_sub(1),
            MaSpec::Ema { period, smoothing } => {
                usize::from(smoothing / (period as f64 + 1.0) < 1.0)
            }
            MaSpec::Ama(p) => match p.matype {
                AmaType::Ema => p.ada_win,
                AmaType::Sma => p.long,
            },
        }
    }

    /// Applies the average to `input`.
    pub fn apply(&self, input: &[f64]) -> Result<IndicatorSeries> {
        match *self {
            MaSpec::Sma { period } => sma(input, period),
            MaSpec::Ema { period, smoothing } => ema(input, period, smoothing),
            MaSpec::Ama(p) => ama(input, &p),
        }
    }
}

pub(crate) fn nonzero(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroPeriod)
    } else {
        Ok(())
    }
}

pub(crate) fn check_smoothing(s: f64) -> Result<()> {
    if s.is_finite() && s > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(
            "EMA smoothing factor must be positive",
        ))
    }
}

pub(crate) fn non_empty(input: &[f64]) -> Result<()> {
    if input.is_empty() {
        Err(Error::EmptySeries)
    } else {
        Ok(())
    }
}
