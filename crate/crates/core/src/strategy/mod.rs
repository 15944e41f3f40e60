//! Long-only signal state machines.
//!
//! Each strategy walks the series once, holding a single flag (flat or long),
//! and emits a Buy only while flat and a Sell only while long. The output
//! therefore always starts with a Buy and strictly alternates.

mod bands;
mod cross;
mod oscillators;

use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::indicators::MaSpec;
use crate::market::OhlcvSeries;
use crate::{Error, Result};

pub use bands::{bollinger_signals, keltner_signals};
pub use cross::{macd_signals, price_cross_signals, two_average_signals};
pub use oscillators::{aroon_signals, rsi_signals, OSCILLATOR_SCAN_START};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(
    feature = "serde",
    derive(Serialize, Deserialize),
    serde(rename_all = "lowercase")
)]
pub enum Action {
    Buy,
    Sell,
}

impl Action {
    pub fn as_str(&self) -> &'static str {
        match self {
            Action::Buy => "buy",
            Action::Sell => "sell",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SignalEvent {
    pub bar_index: usize,
    pub action: Action,
}

impl SignalEvent {
    pub fn buy(bar_index: usize) -> Self {
        Self {
            bar_index,
            action: Action::Buy,
        }
    }

    pub fn sell(bar_index: usize) -> Self {
        Self {
            bar_index,
            action: Action::Sell,
        }
    }
}

/// Checks ordering and alternation. Returns the offending event position.
pub fn validate_signals(signals: &[SignalEvent]) -> Result<()> {
    for (k, ev) in signals.iter().enumerate() {
        let expected = if k % 2 == 0 {
            Action::Buy
        } else {
            Action::Sell
        };
        if ev.action != expected || (k > 0 && signals[k - 1].bar_index >= ev.bar_index) {
            return Err(Error::NonAlternatingSignals(k));
        }
    }
    Ok(())
}

/// Flat/long position flag plus the events it has produced.
#[derive(Debug, Default)]
pub(crate) struct Position {
    long: bool,
    events: Vec<SignalEvent>,
}

impl Position {
    pub(crate) fn is_long(&self) -> bool {
        self.long
    }

    pub(crate) fn buy(&mut self, i: usize) {
        if !self.long {
            self.long = true;
            self.events.push(SignalEvent::buy(i));
        }
    }

    pub(crate) fn sell(&mut self, i: usize) {
        if self.long {
            self.long = false;
            self.events.push(SignalEvent::sell(i));
        }
    }

    pub(crate) fn into_events(self) -> Vec<SignalEvent> {
        self.events
    }
}

/// RSI strategy variant (`rsitype`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(
    feature = "serde",
    derive(Serialize, Deserialize),
    serde(try_from = "u8", into = "u8")
)]
pub enum RsiMode {
    /// Thresholds and rate window only (1).
    Raw,
    /// Additionally requires the close to sit outside `(1 ± sma_rate)·SMA` (2).
    SmaGated,
}

/// Aroon strategy variant (`aroonType`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(
    feature = "serde",
    derive(Serialize, Deserialize),
    serde(try_from = "u8", into = "u8")
)]
pub enum AroonMode {
    /// Plain Up/Down crossover (1).
    Raw,
    /// Crossover only when the opposing line is below the weakness threshold (2).
    WeakGated,
}

macro_rules! numbered_mode {
    ($ty:ident, $gated:ident, $msg:literal) => {
        impl TryFrom<u8> for $ty {
            type Error = Error;

            fn try_from(v: u8) -> Result<Self> {
                match v {
                    1 => Ok($ty::Raw),
                    2 => Ok($ty::$gated),
                    _ => Err(Error::InvalidParams($msg)),
                }
            }
        }

        impl From<$ty> for u8 {
            fn from(m: $ty) -> u8 {
                if m == $ty::Raw {
                    1
                } else {
                    2
                }
            }
        }
    };
}

numbered_mode!(RsiMode, SmaGated, "rsitype must be 1 or 2");
numbered_mode!(AroonMode, WeakGated, "aroon_type must be 1 or 2");

/// RSI overbought/oversold parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(Serialize, Deserialize),
    serde(default, deny_unknown_fields)
)]
pub struct RsiConfig {
    pub period: usize,
    pub down_thres: f64,
    pub upper_thres: f64,
    pub diff_rate: f64,
    pub rsitype: RsiMode,
    pub sma_period: usize,
    pub sma_rate: f64,
}

impl Default for RsiConfig {
    fn default() -> Self {
        Self {
            period: 14,
            down_thres: 30.0,
            upper_thres: 70.0,
            diff_rate: 0.0024,
            rsitype: RsiMode::Raw,
            sma_period: 20,
            sma_rate: 0.001,
        }
    }
}

/// Aroon crossover parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(Serialize, Deserialize),
    serde(default, deny_unknown_fields)
)]
pub struct AroonConfig {
    pub period: usize,
    pub aroon_type: AroonMode,
    pub weak_thres: f64,
}

impl Default for AroonConfig {
    fn default() -> Self {
        Self {
            period: 25,
            aroon_type: AroonMode::Raw,
            weak_thres: 45.0,
        }
    }
}

/// Strategy selection and parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(Serialize, Deserialize),
    serde(tag = "kind", rename_all = "snake_case")
)]
pub enum StrategyConfig {
    /// Buy at the first bar and hold.
    BuyAndHold,
    /// Golden/dead cross of a fast and a slow average.
    TwoAverage {
        fast: MaSpec,
        slow: MaSpec,
    },
    /// Close crossing a single average.
    PriceCross {
        ma: MaSpec,
    },
    /// Breakout above the upper Keltner band, exit below the lower.
    Keltner {
        ma: MaSpec,
        #[cfg_attr(feature = "serde", serde(default = "default_band_mult"))]
        mult: f64,
        #[cfg_attr(feature = "serde", serde(default))]
        atr_period: Option<usize>,
    },
    Rsi(RsiConfig),
    Aroon(AroonConfig),
    /// Mean reversion: buy below the lower band, sell above the upper.
    Bollinger {
        ma: MaSpec,
        #[cfg_attr(feature = "serde", serde(default = "default_band_mult"))]
        dev: f64,
    },
    Macd {
        #[cfg_attr(feature = "serde", serde(default = "default_macd_short"))]
        short: usize,
        #[cfg_attr(feature = "serde", serde(default = "default_macd_long"))]
        long: usize,
        #[cfg_attr(feature = "serde", serde(default = "default_macd_signal"))]
        signal: usize,
    },
}

#[cfg(feature = "serde")]
fn default_band_mult() -> f64 {
    2.0
}
#[cfg(feature = "serde")]
fn default_macd_short() -> usize {
    12
}
#[cfg(feature = "serde")]
fn default_macd_long() -> usize {
    26
}
#[cfg(feature = "serde")]
fn default_macd_signal() -> usize {
    9
}

fn check_period(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroPeriod)
    } else {
        Ok(())
    }
}

fn check_nonneg(x: f64, what: &'static str) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(what))
    }
}

impl StrategyConfig {
    /// Short lowercase tag, matching the config `kind`.
    pub fn name(&self) -> &'static str {
        match self {
            StrategyConfig::BuyAndHold => "buy_and_hold",
            StrategyConfig::TwoAverage { .. } => "two_average",
            StrategyConfig::PriceCross { .. } => "price_cross",
            StrategyConfig::Keltner { .. } => "keltner",
            StrategyConfig::Rsi(_) => "rsi",
            StrategyConfig::Aroon(_) => "aroon",
            StrategyConfig::Bollinger { .. } => "bollinger",
            StrategyConfig::Macd { .. } => "macd",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StrategyConfig::BuyAndHold => Ok(()),
            StrategyConfig::TwoAverage { fast, slow } => {
                fast.validate()?;
                slow.validate()
            }
            StrategyConfig::PriceCross { ma } => ma.validate(),
            StrategyConfig::Keltner {
                ma,
                mult,
                atr_period,
            } => {
                ma.validate()?;
                check_nonneg(*mult, "Keltner multiplier must be >= 0")?;
                atr_period.map_or(Ok(()), check_period)
            }
            StrategyConfig::Rsi(c) => {
                check_period(c.period)?;
                if !(0.0 <= c.down_thres && c.down_thres < c.upper_thres && c.upper_thres <= 100.0)
                {
                    return Err(Error::InvalidParams(
                        "RSI thresholds need 0 <= down < upper <= 100",
                    ));
                }
                check_nonneg(c.diff_rate, "RSI diff_rate must be >= 0")?;
                if c.rsitype == RsiMode::SmaGated {
                    check_period(c.sma_period)?;
                    check_nonneg(c.sma_rate, "RSI sma_rate must be >= 0")?;
                }
                Ok(())
            }
            StrategyConfig::Aroon(c) => {
                check_period(c.period)?;
                if !(c.weak_thres > 0.0 && c.weak_thres < 100.0) {
                    return Err(Error::InvalidParams(
                        "Aroon weak_thres must lie in (0, 100)",
                    ));
                }
                Ok(())
            }
            StrategyConfig::Bollinger { ma, dev } => {
                ma.validate()?;
                check_nonneg(*dev, "Bollinger dev must be >= 0")
            }
            StrategyConfig::Macd {
                short,
                long,
                signal,
            } => {
                check_period(*short)?;
                check_period(*long)?;
                check_period(*signal)
            }
        }
    }

    /// First bar index at which a signal may be emitted.
    pub fn scan_start(&self) -> usize {
        let ema_warm = |n: usize| MaSpec::ema(n).warmup_len();
        match self {
            StrategyConfig::BuyAndHold => 0,
            StrategyConfig::TwoAverage { fast, slow } => {
                fast.warmup_len().max(slow.warmup_len()) + 1
            }
            StrategyConfig::PriceCross { ma } => ma.warmup_len() + 1,
            StrategyConfig::Keltner { ma, atr_period, .. } => {
                let atr_warm = atr_period.unwrap_or_else(|| ma.period()).saturating_sub(1);
                ma.warmup_len().max(atr_warm) + 1
            }
            StrategyConfig::Rsi(_) | StrategyConfig::Aroon(_) => OSCILLATOR_SCAN_START,
            StrategyConfig::Bollinger { ma, .. } => {
                ma.warmup_len().max(ma.period().saturating_sub(1)) + 1
            }
            StrategyConfig::Macd {
                short,
                long,
                signal,
            } => ema_warm(*short).max(ema_warm(*long)) + signal.saturating_sub(1) + 1,
        }
    }

    /// Minimum series length the strategy accepts.
    pub fn min_len(&self) -> usize {
        match self {
            StrategyConfig::Rsi(_) | StrategyConfig::Aroon(_) => OSCILLATOR_SCAN_START + 2,
            _ => self.scan_start() + 1,
        }
    }

    /// Runs the strategy over `series`.
    pub fn signals(&self, series: &OhlcvSeries) -> Result<Vec<SignalEvent>> {
        self.validate()?;
        if series.len() < self.min_len() {
            return Err(Error::TooShort {
                needed: self.min_len(),
                got: series.len(),
            });
        }
        match *self {
            StrategyConfig::BuyAndHold => Ok(vec![SignalEvent::buy(0)]),
            StrategyConfig::TwoAverage { fast, slow } => two_average_signals(series, &fast, &slow),
            StrategyConfig::PriceCross { ma } => price_cross_signals(series, &ma),
            StrategyConfig::Keltner {
                ma,
                mult,
                atr_period,
            } => keltner_signals(series, &ma, mult, atr_period),
            StrategyConfig::Rsi(c) => rsi_signals(series, &c),
            StrategyConfig::Aroon(c) => aroon_signals(series, &c),
            StrategyConfig::Bollinger { ma, dev } => bollinger_signals(series, &ma, dev),
            StrategyConfig::Macd {
                short,
                long,
                signal,
            } => macd_signals(series, short, long, signal),
        }
    }
}

pub(crate) fn ensure_len(series: &OhlcvSeries, needed: usize) -> Result<()> {
    if series.len() < needed {
        Err(Error::TooShort {
            needed,
            got: series.len(),
        })
    } else {
        Ok(())
    }
}
