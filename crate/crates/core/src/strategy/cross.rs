use alloc::vec::Vec;

use super::{ensure_len, Position, SignalEvent};
use crate::indicators::{macd, MaSpec};
use crate::market::OhlcvSeries;
use crate::Result;

/// Strict crossover walk: Buy when `fast` moves from strictly below `slow` to
/// strictly above it, Sell on the mirror move. Equality never counts as a cross.
fn cross_walk(fast: &[f64], slow: &[f64], start: usize) -> Vec<SignalEvent> {
    let mut pos = Position::default();
    for i in start.max(1)..fast.len() {
        let below_then_above = fast[i - 1] < slow[i - 1] && fast[i] > slow[i];
        let above_then_below = fast[i - 1] > slow[i - 1] && fast[i] < slow[i];
        if !pos.is_long() && below_then_above {
            pos.buy(i);
        } else if pos.is_long() && above_then_below {
            pos.sell(i);
        }
    }
    pos.into_events()
}

/// Golden cross (fast above slow) buys, dead cross sells.
pub fn two_average_signals(
    series: &OhlcvSeries,
    fast: &MaSpec,
    slow: &MaSpec,
) -> Result<Vec<SignalEvent>> {
    let start = fast.warmup_len().max(slow.warmup_len()) + 1;
    ensure_len(series, start + 1)?;
    let closes = series.closes();
    let f = fast.apply(&closes)?;
    let s = slow.apply(&closes)?;
    Ok(cross_walk(f.values(), s.values(), start))
}

/// Close crossing above the average buys, crossing below sells.
pub fn price_cross_signals(series: &OhlcvSeries, ma: &MaSpec) -> Result<Vec<SignalEvent>> {
    let start = ma.warmup_len() + 1;
    ensure_len(series, start + 1)?;
    let closes = series.closes();
    let line = ma.apply(&closes)?;
    Ok(cross_walk(&closes, line.values(), start))
}

/// MACD line crossing its signal line. No zero-line confirmation.
pub fn macd_signals(
    series: &OhlcvSeries,
    short: usize,
    long: usize,
    signal: usize,
) -> Result<Vec<SignalEvent>> {
    let lines = macd(&series.closes(), short, long, signal)?;
    let start = lines.signal.warmup_len() + 1;
    ensure_len(series, start + 1)?;
    Ok(cross_walk(
        lines.macd.values(),
        lines.signal.values(),
        start,
    ))
}
