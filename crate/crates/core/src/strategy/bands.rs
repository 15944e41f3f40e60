use alloc::vec::Vec;

use super::{ensure_len, Position, SignalEvent};
use crate::indicators::{bollinger, keltner, MaSpec};
use crate::market::OhlcvSeries;
use crate::Result;

/// Trend following: close breaking above the upper band buys, breaking below
/// the lower band sells.
pub fn keltner_signals(
    series: &OhlcvSeries,
    ma: &MaSpec,
    mult: f64,
    atr_period: Option<usize>,
) -> Result<Vec<SignalEvent>> {
    let bands = keltner(series.bars(), ma, mult, atr_period)?;
    let start = bands.warmup_len() + 1;
    ensure_len(series, start + 1)?;
    let close = series.closes();
    let (up, lo) = (bands.upper.values(), bands.lower.values());
    let mut pos = Position::default();
    for i in start..close.len() {
        if !pos.is_long() && close[i - 1] <= up[i - 1] && close[i] > up[i] {
            pos.buy(i);
        } else if pos.is_long() && close[i - 1] >= lo[i - 1] && close[i] < lo[i] {
            pos.sell(i);
        }
    }
    Ok(pos.into_events())
}

/// Mean reversion: close falling through the lower band buys, rising through
/// the upper band sells.
pub fn bollinger_signals(series: &OhlcvSeries, ma: &MaSpec, dev: f64) -> Result<Vec<SignalEvent>> {
    let bands = bollinger(series.bars(), ma, dev)?;
    let start = bands.warmup_len() + 1;
    ensure_len(series, start + 1)?;
    let close = series.closes();
    let (up, lo) = (bands.upper.values(), bands.lower.values());
    let mut pos = Position::default();
    for i in start..close.len() {
        if !pos.is_long() && close[i - 1] >= lo[i - 1] && close[i] < lo[i] {
            pos.buy(i);
        } else if pos.is_long() && close[i - 1] <= up[i - 1] && close[i] > up[i] {
            pos.sell(i);
        }
    }
    Ok(pos.into_events())
}
