//! Daily OHLCV bars and series.

use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use chrono::NaiveDate;

use crate::{Error, Result};

/// One trading day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bar {
    pub date: NaiveDate,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
    pub volume: u64,
}

/// Which invariant a bar fails, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarDefect {
    /// A price is NaN, infinite, zero or negative.
    NonPositive,
    /// `low > high`.
    Inverted,
    /// `open` or `close` lies outside `[low, high]`.
    OutsideRange,
}

impl Bar {
    /// Checks the bar invariants. The open/close range check is the only one
    /// that can be repaired, see [`Bar::clamp_into_range`].
    pub fn defect(&self) -> Option<BarDefect> {
        let prices = [self.open, self.high, self.low, self.close];
        if prices.iter().any(|p| !p.is_finite() || *p <= 0.0) {
            return Some(BarDefect::NonPositive);
        }
        if self.low > self.high {
            return Some(BarDefect::Inverted);
        }
        if self.open < self.low
            || self.open > self.high
            || self.close < self.low
            || self.close > self.high
        {
            return Some(BarDefect::OutsideRange);
        }
        None
    }

    /// Clamps open and close into `[low, high]`. Returns true if anything moved.
    pub fn clamp_into_range(&mut self) -> bool {
        let (open, close) = (self.open, self.close);
        self.open = open.clamp(self.low, self.high);
        self.close = close.clamp(self.low, self.high);
        self.open != open || self.close != close
    }

    /// `(high + low + close) / 3`, written so that a flat bar yields its price exactly.
    pub fn typical_price(&self) -> f64 {
        self.low + ((self.high - self.low) + (self.close - self.low)) / 3.0
    }
}

/// An ordered, validated daily series for one symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct OhlcvSeries {
    symbol: String,
    bars: Vec<Bar>,
}

impl OhlcvSeries {
    /// Builds a series, rejecting empty input, non-increasing dates and bars
    /// that fail any invariant (strict).
    pub fn new(symbol: impl Into<String>, bars: Vec<Bar>) -> Result<Self> {
        if bars.is_empty() {
            return Err(Error::EmptySeries);
        }
        for (i, bar) in bars.iter().enumerate() {
            if bar.defect().is_some() {
                return Err(Error::InvariantViolation(i));
            }
            if i > 0 && bars[i - 1].date >= bar.date {
                return Err(Error::NonMonotonicDates(i));
            }
        }
        Ok(Self {
            symbol: symbol.into(),
            bars,
        })
    }

    /// Synthetic series from closes only (`open = high = low = close`),
    /// dated consecutively from 2000-01-01. Handy for tests and examples.
    pub fn from_closes(symbol: impl Into<String>, closes: &[f64]) -> Result<Self> {
        let start = NaiveDate::from_ymd_opt(2000, 1, 1).expect("valid date");
        let bars = closes
            .iter()
            .zip(start.iter_days())
            .map(|(&c, date)| Bar {
                date,
                open: c,
                high: c,
                low: c,
                close: c,
                volume: 0,
            })
            .collect();
        Self::new(symbol, bars)
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    /// Always false; a series holds at least one bar.
    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn closes(&self) -> Vec<f64> {
        self.bars.iter().map(|b| b.close).collect()
    }

    pub fn highs(&self) -> Vec<f64> {
        self.bars.iter().map(|b| b.high).collect()
    }

    pub fn lows(&self) -> Vec<f64> {
        self.bars.iter().map(|b| b.low).collect()
    }

    pub fn typical_prices(&self) -> Vec<f64> {
        self.bars.iter().map(Bar::typical_price).collect()
    }
}

/// Splits `[0, len)` into consecutive blocks of `bars_per_year` bars; the last
/// block carries the remainder. `bars_per_year == 0` is treated as 1.
pub fn slice_years(len: usize, bars_per_year: usize) -> Vec<Range<usize>> {
    let step = bars_per_year.max(1);
    (0..len)
        .step_by(step)
        .map(|start| start..(start + step).min(len))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn bar(day: u32, o: f64, h: f64, l: f64, c: f64) -> Bar {
        Bar {
            date: NaiveDate::from_ymd_opt(2021, 1, day).unwrap(),
            open: o,
            high: h,
            low: l,
            close: c,
            volume: 1,
        }
    }

    #[test]
    fn eleven_blocks_for_eleven_years() {
        let r = slice_years(2769, 252);
        assert_eq!(r.len(), 11);
        assert!(r[..10].iter().all(|x| x.len() == 252));
        assert_eq!(r[10], 2520..2769);
    }

    #[test]
    fn single_and_remainder_blocks() {
        assert_eq!(slice_years(252, 252), vec![0..252]);
        assert_eq!(slice_years(10, 252), vec![0..10]);
        assert!(slice_years(0, 252).is_empty());
    }

    #[test]
    fn rejects_bad_series() {
        assert_eq!(OhlcvSeries::new("X", vec![]), Err(Error::EmptySeries));
        let b = vec![bar(2, 1.0, 2.0, 0.5, 1.5), bar(2, 1.0, 2.0, 0.5, 1.5)];
        assert_eq!(OhlcvSeries::new("X", b), Err(Error::NonMonotonicDates(1)));
        let b = vec![bar(2, 1.0, 2.0, 0.5, 2.5)];
        assert_eq!(OhlcvSeries::new("X", b), Err(Error::InvariantViolation(0)));
    }

    #[test]
    fn defects() {
        assert_eq!(bar(1, 1.0, 2.0, 0.5, 1.0).defect(), None);
        assert_eq!(
            bar(1, 1.0, 2.0, 3.0, 1.0).defect(),
            Some(BarDefect::Inverted)
        );
        assert_eq!(
            bar(1, 0.0, 2.0, 0.5, 1.0).defect(),
            Some(BarDefect::NonPositive)
        );
        assert_eq!(
            bar(1, 1.0, f64::INFINITY, 0.5, 1.0).defect(),
            Some(BarDefect::NonPositive)
        );
        let mut b = bar(1, 1.0, 2.0, 0.5, 2.5);
        assert_eq!(b.defect(), Some(BarDefect::OutsideRange));
        assert!(b.clamp_into_range());
        assert_eq!(b.close, 2.0);
        assert_eq!(b.defect(), None);
    }

    #[test]
    fn flat_bar_typical_price_is_exact() {
        for c in [0.1, 1.0 / 3.0, 2.604, 1271.87] {
            assert_eq!(bar(1, c, c, c, c).typical_price(), c);
        }
        assert_eq!(bar(1, 2.0, 3.0, 1.0, 2.0).typical_price(), 2.0);
    }
}
