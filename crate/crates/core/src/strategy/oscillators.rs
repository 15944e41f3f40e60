use alloc::vec::Vec;

use super::{ensure_len, AroonConfig, AroonMode, Position, RsiConfig, RsiMode, SignalEvent};
use crate::indicators::{aroon, rsi, sma};
use crate::market::OhlcvSeries;
use crate::Result;

/// First bar scanned by the RSI and Aroon strategies. The scan stops one bar
/// short of the end of the series.
pub const OSCILLATOR_SCAN_START: usize = 60;

/// RSI overbought/oversold.
///
/// Oversold (`rsi < down_thres`) buys when the one-bar drop rate
/// `(c[i-1] − c[i]) / c[i-1]` lies in `[0, diff_rate]`, i.e. the fall is
/// flattening out. Overbought (`rsi > upper_thres`) sells on the mirrored rise
/// rate. `RsiMode::SmaGated` additionally needs `c < (1 − sma_rate)·SMA` to buy
/// and `c > (1 + sma_rate)·SMA` to sell.
pub fn rsi_signals(series: &OhlcvSeries, cfg: &RsiConfig) -> Result<Vec<SignalEvent>> {
    ensure_len(series, OSCILLATOR_SCAN_START + 2)?;
    let close = series.closes();
    let rsi = rsi(&close, cfg.period)?;
    let sma = match cfg.rsitype {
        RsiMode::Raw => None,
        RsiMode::SmaGated => Some(sma(&close, cfg.sma_period)?),
    };
    let mut pos = Position::default();
    for i in OSCILLATOR_SCAN_START..close.len() - 1 {
        let (oversold_gate, overbought_gate) = match &sma {
            None => (true, true),
            Some(s) => (
                close[i] < (1.0 - cfg.sma_rate) * s[i],
                close[i] > (1.0 + cfg.sma_rate) * s[i],
            ),
        };
        if rsi[i] < cfg.down_thres && oversold_gate {
            let downrate = (close[i - 1] - close[i]) / close[i - 1];
            if downrate <= cfg.diff_rate && downrate >= 0.0 {
                pos.buy(i);
            }
        } else if rsi[i] > cfg.upper_thres && overbought_gate {
            let uprate = (close[i] - close[i - 1]) / close[i - 1];
            if uprate <= cfg.diff_rate && uprate >= 0.0 {
                pos.sell(i);
            }
        }
    }
    Ok(pos.into_events())
}

/// Aroon crossover: Up crossing above Down buys, Down crossing above Up sells.
/// `AroonMode::WeakGated` only buys while Down is below `weak_thres` and only
/// sells while Up is below it.
pub fn aroon_signals(series: &OhlcvSeries, cfg: &AroonConfig) -> Result<Vec<SignalEvent>> {
    ensure_len(series, OSCILLATOR_SCAN_START + 2)?;
    let lines = aroon(series.bars(), cfg.period)?;
    let (up, down) = (lines.up.values(), lines.down.values());
    let mut pos = Position::default();
    for i in OSCILLATOR_SCAN_START..series.len() - 1 {
        let (buy_gate, sell_gate) = match cfg.aroon_type {
            AroonMode::Raw => (true, true),
            AroonMode::WeakGated => (down[i] < cfg.weak_thres, up[i] < cfg.weak_thres),
        };
        if up[i - 1] < down[i - 1] && up[i] > down[i] && buy_gate && !pos.is_long() {
            pos.buy(i);
        } else if up[i - 1] > down[i - 1] && up[i] < down[i] && sell_gate && pos.is_long() {
            pos.sell(i);
        }
    }
    Ok(pos.into_events())
}
