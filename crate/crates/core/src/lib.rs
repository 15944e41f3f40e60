//! Deterministic technical-analysis backtesting kernels.
//!
//! Everything in this crate is a pure function of immutable inputs and works
//! without `std` (an allocator is required). File formats, configuration and
//! the command-line front end live in the `quantbt` crate.
//!
//! Layout:
//!
//! * [`market`]: daily OHLCV bars, validated series and 252-bar year slicing.
//! * [`indicators`]: SMA/EMA, efficiency ratio, adaptive moving averages,
//!   ATR/Keltner, Bollinger, RSI/RMI, Aroon and MACD.
//! * [`strategy`]: long-only Buy/Sell state machines over those indicators.
//! * [`backtest`]: all-in/all-out zero-cost equity simulation.
//! * [`metrics`]: drawdown, Sharpe, information ratio, yearly returns.
//! * [`kelly`]: optimal betting fraction and its log-return curve.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod backtest;
pub mod error;
pub mod indicators;
pub mod kelly;
pub mod market;
pub mod metrics;
pub mod strategy;

mod math;

pub use error::{Error, Result};

/// Trading days per year used for annualization unless overridden.
pub const TRADING_DAYS: usize = 252;
