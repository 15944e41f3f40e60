use alloc::vec::Vec;

use super::{nonzero, sma, IndicatorSeries, MaSpec};
use crate::market::Bar;
use crate::math::window_std;
use crate::{Error, Result};

/// Middle line with symmetric upper/lower offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct BandSet {
    pub middle: IndicatorSeries,
    pub upper: IndicatorSeries,
    pub lower: IndicatorSeries,
}

impl BandSet {
    fn from_width(middle: IndicatorSeries, width: &[f64], warmup_len: usize) -> Self {
        let m = middle.values();
        let upper = m.iter().zip(width).map(|(m, w)| m + w).collect();
        let lower = m.iter().zip(width).map(|(m, w)| m - w).collect();
        Self {
            upper: IndicatorSeries::new(upper, warmup_len),
            lower: IndicatorSeries::new(lower, warmup_len),
            middle,
        }
    }

    pub fn warmup_len(&self) -> usize {
        self.upper.warmup_len()
    }
}

fn check_bars(bars: &[Bar]) -> Result<()> {
    if bars.is_empty() {
        Err(Error::EmptySeries)
    } else {
        Ok(())
    }
}

fn check_multiplier(m: f64) -> Result<()> {
    if m.is_finite() && m >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(
            "band multiplier must be finite and >= 0",
        ))
    }
}

/// Wilder's true range. The first bar has no previous close and uses `high − low`.
pub fn true_range(bars: &[Bar]) -> Result<IndicatorSeries> {
    check_bars(bars)?;
    let out = bars
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let hl = b.high - b.low;
            if i == 0 {
                return hl;
            }
            let pc = bars[i - 1].close;
            hl.max(b.high - pc).max(pc - b.low)
        })
        .collect();
    Ok(IndicatorSeries::new(out, 0))
}

/// Average true range: SMA of [`true_range`].
pub fn atr(bars: &[Bar], n: usize) -> Result<IndicatorSeries> {
    nonzero(n)?;
    let tr = true_range(bars)?;
    sma(tr.values(), n)
}

/// Keltner channel: `ma` over the typical price, bands at `± mult·ATR`.
/// The ATR period defaults to the average's period (N₁ for AMA).
pub fn keltner(bars: &[Bar], ma: &MaSpec, mult: f64, atr_period: Option<usize>) -> Result<BandSet> {
    ma.validate()?;
    check_multiplier(mult)?;
    check_bars(bars)?;
    let tp: Vec<f64> = bars.iter().map(Bar::typical_price).collect();
    let middle = ma.apply(&tp)?;
    let range = atr(bars, atr_period.unwrap_or_else(|| ma.period()))?;
    let width: Vec<f64> = range.values().iter().map(|a| mult * a).collect();
    let warm = middle.warmup_len().max(range.warmup_len());
    Ok(BandSet::from_width(middle, &width, warm))
}

/// Bollinger bands over the typical price: middle `ma` (SMA in the classic
/// form), bands at `± dev·σ` with σ the population standard deviation of the
/// last `ma.period()` typical prices. Width is zero until a full window exists.
pub fn bollinger(bars: &[Bar], ma: &MaSpec, dev: f64) -> Result<BandSet> {
    ma.validate()?;
    check_multiplier(dev)?;
    check_bars(bars)?;
    let n = ma.period();
    let tp: Vec<f64> = bars.iter().map(Bar::typical_price).collect();
    let middle = ma.apply(&tp)?;
    let width: Vec<f64> = (0..tp.len())
        .map(|i| {
            if i + 1 < n {
                0.0
            } else {
                dev * window_std(&tp[i + 1 - n..=i])
            }
        })
        .collect();
    let warm = middle.warmup_len().max(n - 1);
    Ok(BandSet::from_width(middle, &width, warm))
}
