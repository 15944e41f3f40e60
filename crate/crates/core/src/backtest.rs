//! All-in/all-out, long-only, zero-cost simulation.
//!
//! Fills happen at the signal bar's close. Before the first Buy the equity
//! sits at that Buy's close, so the curve starts at the strategy's initial
//! price. While long the equity tracks the close; while flat it is frozen.

use alloc::vec::Vec;

use crate::market::OhlcvSeries;
use crate::metrics::MetricReport;
use crate::strategy::{validate_signals, Action, SignalEvent};
use crate::{Error, Result, TRADING_DAYS};

/// A round trip (or the still-open final position).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trade {
    pub entry_index: usize,
    /// `None` while the position is still open at the last bar.
    pub exit_index: Option<usize>,
    pub entry_price: f64,
    /// Exit close, or the last close for an open position.
    pub exit_price: f64,
    pub return_factor: f64,
}

/// Strategy "price" per bar.
#[derive(Debug, Clone, PartialEq)]
pub struct EquityCurve {
    pub values: Vec<f64>,
    pub initial_price: f64,
    pub final_price: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestResult {
    pub equity: EquityCurve,
    pub trades: Vec<Trade>,
    pub report: MetricReport,
}

#[derive(Debug, Clone, Copy)]
pub struct BacktestOptions<'a> {
    pub trading_days: usize,
    /// Benchmark closes aligned with the series; `None` benchmarks the series against itself.
    pub benchmark: Option<&'a [f64]>,
}

impl Default for BacktestOptions<'_> {
    fn default() -> Self {
        Self {
            trading_days: TRADING_DAYS,
            benchmark: None,
        }
    }
}

/// Simulates `signals` over `series`, benchmarked against its own closes.
pub fn run(series: &OhlcvSeries, signals: &[SignalEvent]) -> Result<BacktestResult> {
    run_with(series, signals, &BacktestOptions::default())
}

pub fn run_with(
    series: &OhlcvSeries,
    signals: &[SignalEvent],
    opts: &BacktestOptions<'_>,
) -> Result<BacktestResult> {
    validate_signals(signals)?;
    let close = series.closes();
    if let Some(ev) = signals.iter().find(|e| e.bar_index >= close.len()) {
        return Err(Error::IndexOutOfRange {
            index: ev.bar_index,
            len: close.len(),
        });
    }
    let (values, trades) = simulate(&close, signals);
    let equity = EquityCurve {
        initial_price: values[0],
        final_price: values[values.len() - 1],
        values,
    };
    let benchmark = opts.benchmark.unwrap_or(&close);
    let report = MetricReport::compute(&equity.values, trades.len(), benchmark, opts.trading_days)?;
    Ok(BacktestResult {
        equity,
        trades,
        report,
    })
}

fn simulate(close: &[f64], signals: &[SignalEvent]) -> (Vec<f64>, Vec<Trade>) {
    let mut base = signals.first().map_or(close[0], |e| close[e.bar_index]);
    let mut values = Vec::with_capacity(close.len());
    let mut trades = Vec::with_capacity(signals.len().div_ceil(2));
    let mut entry: Option<usize> = None;
    let mut pending = signals.iter().peekable();
    for (i, &c) in close.iter().enumerate() {
        let mut value = match entry {
            Some(e) => base * (c / close[e]),
            None => base,
        };
        if let Some(ev) = pending.next_if(|ev| ev.bar_index == i) {
            match (ev.action, entry) {
                (Action::Buy, None) => {
                    entry = Some(i);
                    value = base;
                }
                (Action::Sell, Some(e)) => {
                    let rf = c / close[e];
                    base *= rf;
                    value = base;
                    trades.push(Trade {
                        entry_index: e,
                        exit_index: Some(i),
                        entry_price: close[e],
                        exit_price: c,
                        return_factor: rf,
                    });
                    entry = None;
                }
                _ => unreachable!("signals validated"),
            }
        }
        values.push(value);
    }
    if let Some(e) = entry {
        let c = close[close.len() - 1];
        trades.push(Trade {
            entry_index: e,
            exit_index: None,
            entry_price: close[e],
            exit_price: c,
            return_factor: c / close[e],
        });
    }
    (values, trades)
}
