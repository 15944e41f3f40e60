use alloc::vec;
use alloc::vec::Vec;

use super::{ema, nonzero, sma, IndicatorSeries, DEFAULT_SMOOTHING};
use crate::market::Bar;
use crate::{Error, Result};

/// Reading reported when neither side has moved (and during warm-up).
const NEUTRAL: f64 = 50.0;

fn strength(up: f64, dn: f64) -> f64 {
    let total = up + dn;
    if total == 0.0 {
        NEUTRAL
    } else {
        100.0 * (up / total)
    }
}

/// Relative strength index with Wilder smoothing.
///
/// The averages are seeded with the plain means of the first `n` close-to-close
/// moves, so the first real reading sits at index `n`; earlier entries are 50.
pub fn rsi(closes: &[f64], n: usize) -> Result<IndicatorSeries> {
    nonzero(n)?;
    if closes.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: closes.len(),
        });
    }
    let mut out = vec![NEUTRAL; closes.len()];
    if closes.len() <= n {
        return Ok(IndicatorSeries::new(out, closes.len()));
    }
    let move_at = |i: usize| {
        if closes[i] > closes[i - 1] {
            (closes[i] - closes[i - 1], 0.0)
        } else {
            (0.0, closes[i - 1] - closes[i])
        }
    };
    let nf = n as f64;
    let (mut up_sum, mut dn_sum) = (0.0, 0.0);
    for i in 1..=n {
        let (up, dn) = move_at(i);
        up_sum += up;
        dn_sum += dn;
    }
    let (mut upavg, mut dnavg) = (up_sum / nf, dn_sum / nf);
    out[n] = strength(upavg, dnavg);
    for (i, slot) in out.iter_mut().enumerate().skip(n + 1) {
        let (up, dn) = move_at(i);
        upavg = (upavg * (nf - 1.0) + up) / nf;
        dnavg = (dnavg * (nf - 1.0) + dn) / nf;
        *slot = strength(upavg, dnavg);
    }
    Ok(IndicatorSeries::new(out, n))
}

/// Relative momentum index: [`rsi`] with moves measured against the close `m`
/// bars back. Seeded over the first `n` such moves; first reading at `m + n − 1`.
pub fn rmi(closes: &[f64], n: usize, m: usize) -> Result<IndicatorSeries> {
    nonzero(n)?;
    nonzero(m)?;
    if closes.len() <= m {
        return Err(Error::TooShort {
            needed: m + 1,
            got: closes.len(),
        });
    }
    let first = m + n - 1;
    let mut out = vec![NEUTRAL; closes.len()];
    if closes.len() <= first {
        return Ok(IndicatorSeries::new(out, closes.len()));
    }
    let move_at = |i: usize| {
        if closes[i] > closes[i - m] {
            (closes[i] - closes[i - m], 0.0)
        } else {
            (0.0, closes[i - m] - closes[i])
        }
    };
    let nf = n as f64;
    let (mut up_sum, mut dn_sum) = (0.0, 0.0);
    for i in m..=first {
        let (up, dn) = move_at(i);
        up_sum += up;
        dn_sum += dn;
    }
    let (mut upavg, mut dnavg) = (up_sum / nf, dn_sum / nf);
    out[first] = strength(upavg, dnavg);
    for (i, slot) in out.iter_mut().enumerate().skip(first + 1) {
        let (up, dn) = move_at(i);
        upavg = (upavg * (nf - 1.0) + up) / nf;
        dnavg = (dnavg * (nf - 1.0) + dn) / nf;
        *slot = strength(upavg, dnavg);
    }
    Ok(IndicatorSeries::new(out, first))
}

/// Aroon up/down lines and their difference.
#[derive(Debug, Clone, PartialEq)]
pub struct AroonLines {
    pub up: IndicatorSeries,
    pub down: IndicatorSeries,
    pub osc: IndicatorSeries,
}

/// Aroon over a trailing window of `n + 1` bars (fewer during warm-up).
/// Ties go to the most recent extreme.
pub fn aroon(bars: &[Bar], n: usize) -> Result<AroonLines> {
    nonzero(n)?;
    if bars.len() <= n {
        return Err(Error::TooShort {
            needed: n + 1,
            got: bars.len(),
        });
    }
    let nf = n as f64;
    let mut up = Vec::with_capacity(bars.len());
    let mut down = Vec::with_capacity(bars.len());
    for i in 0..bars.len() {
        let start = i.saturating_sub(n);
        let (mut hi_at, mut lo_at) = (start, start);
        for k in start..=i {
            if bars[k].high >= bars[hi_at].high {
                hi_at = k;
            }
            if bars[k].low <= bars[lo_at].low {
                lo_at = k;
            }
        }
        up.push(100.0 * ((nf - (i - hi_at) as f64) / nf));
        down.push(100.0 * ((nf - (i - lo_at) as f64) / nf));
    }
    let osc = up.iter().zip(&down).map(|(u, d)| u - d).collect();
    Ok(AroonLines {
        up: IndicatorSeries::new(up, n),
        down: IndicatorSeries::new(down, n),
        osc: IndicatorSeries::new(osc, n),
    })
}

/// MACD line, its SMA signal line and the histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct MacdLines {
    pub macd: IndicatorSeries,
    pub signal: IndicatorSeries,
    pub hist: IndicatorSeries,
}

/// `EMA(short) − EMA(long)`, signal `SMA(macd, signal_n)`, histogram the difference.
pub fn macd(closes: &[f64], short_n: usize, long_n: usize, signal_n: usize) -> Result<MacdLines> {
    nonzero(short_n)?;
    nonzero(long_n)?;
    nonzero(signal_n)?;
    let fast = ema(closes, short_n, DEFAULT_SMOOTHING)?;
    let slow = ema(closes, long_n, DEFAULT_SMOOTHING)?;
    let line: Vec<f64> = fast
        .values()
        .iter()
        .zip(slow.values())
        .map(|(f, s)| f - s)
        .collect();
    let macd_warm = fast.warmup_len().max(slow.warmup_len());
    let signal = sma(&line, signal_n)?.into_values();
    let signal_warm = macd_warm + signal_n - 1;
    let hist = line.iter().zip(&signal).map(|(m, s)| m - s).collect();
    Ok(MacdLines {
        macd: IndicatorSeries::new(line, macd_warm),
        signal: IndicatorSeries::new(signal, signal_warm),
        hist: IndicatorSeries::new(hist, signal_warm),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    fn bars_hl(hl: &[(f64, f64)]) -> Vec<Bar> {
        let d0 = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        hl.iter()
            .zip(d0.iter_days())
            .map(|(&(h, l), date)| Bar {
                date,
                open: l,
                high: h,
                low: l,
                close: l,
                volume: 0,
            })
            .collect()
    }

    /// Algorithm transcribed line by line, one bar at a time.
    fn rsi_transcribed(close: &[f64], n: usize) -> Vec<f64> {
        let nf = n as f64;
        let mut res = vec![50.0; close.len()];
        let mut upavg = 0.0;
        let mut dnavg = 0.0;
        for i in 1..close.len() {
            let (up, dn);
            if close[i] > close[i - 1] {
                up = close[i] - close[i - 1];
                dn = 0.0;
            } else {
                up = 0.0;
                dn = close[i - 1] - close[i];
            }
            if i < n {
                upavg += up;
                dnavg += dn;
                continue;
            } else if i == n {
                upavg = (upavg + up) / nf;
                dnavg = (dnavg + dn) / nf;
            } else {
                upavg = (upavg * (nf - 1.0) + up) / nf;
                dnavg = (dnavg * (nf - 1.0) + dn) / nf;
            }
            res[i] = if upavg + dnavg == 0.0 {
                50.0
            } else {
                100.0 * upavg / (upavg + dnavg)
            };
        }
        res
    }

    #[test]
    fn rsi_matches_transcription_on_random_walk() {
        let closes = [10.0, 10.4, 10.1, 10.1, 9.7, 9.9, 10.6, 10.2, 10.8, 11.0];
        let got = rsi(&closes, 3).unwrap();
        let want = rsi_transcribed(&closes, 3);
        for (g, w) in got.values().iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
        assert_eq!(got.warmup_len(), 3);
        assert_eq!(&got.values()[..3], &[50.0; 3]);
    }

    #[test]
    fn rsi_limits() {
        let rising: Vec<f64> = (0..200).map(|i| 1.0 + i as f64).collect();
        let r = rsi(&rising, 14).unwrap();
        assert_eq!(r[199], 100.0);
        let flat = rsi(&[3.0; 30], 5).unwrap();
        assert!(flat.values().iter().all(|&v| v == 50.0));
        assert_eq!(rsi(&[1.0], 3), Err(Error::TooShort { needed: 2, got: 1 }));
    }

    #[test]
    fn rsi_down_moves_decay() {
        // a single down move then a long rise: RSI climbs toward 100 without reaching it early
        let mut c = vec![10.0, 9.0];
        c.extend((0..50).map(|i| 9.0 + 0.1 * (i + 1) as f64));
        let r = rsi(&c, 3).unwrap();
        assert!(r[10] < r[30] && r[30] < 100.0 + 1e-9);
    }

    #[test]
    fn rmi_cases() {
        let closes = [10.0, 10.4, 10.1, 10.1, 9.7, 9.9, 10.6, 10.2, 10.8, 11.0];
        assert_eq!(rmi(&closes, 3, 1).unwrap(), rsi(&closes, 3).unwrap());
        let osc: Vec<f64> = (0..20)
            .map(|i| if i % 2 == 0 { 5.0 } else { 6.0 })
            .collect();
        assert!(rmi(&osc, 4, 2).unwrap().values().iter().all(|&v| v == 50.0));
        assert!(rmi(&[2.0; 10], 3, 2)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 50.0));
        assert_eq!(
            rmi(&[1.0, 2.0], 3, 2),
            Err(Error::TooShort { needed: 3, got: 2 })
        );
    }

    #[test]
    fn aroon_monotone() {
        let inc: Vec<(f64, f64)> = (0..12).map(|i| (2.0 + i as f64, 1.0 + i as f64)).collect();
        let a = aroon(&bars_hl(&inc), 5).unwrap();
        for i in 5..12 {
            assert_eq!(a.up[i], 100.0);
            assert_eq!(a.down[i], 0.0);
            assert_eq!(a.osc[i], 100.0);
        }
        let dec: Vec<(f64, f64)> = (0..12)
            .map(|i| (20.0 - i as f64, 19.0 - i as f64))
            .collect();
        let a = aroon(&bars_hl(&dec), 5).unwrap();
        for i in 5..12 {
            assert_eq!((a.up[i], a.down[i], a.osc[i]), (0.0, 100.0, -100.0));
        }
    }

    #[test]
    fn aroon_interior_max() {
        let highs = [1.0, 2.0, 3.0, 4.0, 9.0, 5.0, 6.0, 7.0];
        let hl: Vec<(f64, f64)> = highs.iter().map(|&h| (h, h - 0.5)).collect();
        let a = aroon(&bars_hl(&hl), 5).unwrap();
        assert_eq!(a.up[7], 40.0);
    }

    #[test]
    fn aroon_ties_prefer_recent() {
        let hl = [(5.0, 1.0), (5.0, 1.0), (5.0, 1.0), (5.0, 1.0)];
        let a = aroon(&bars_hl(&hl), 3).unwrap();
        assert_eq!((a.up[3], a.down[3]), (100.0, 100.0));
        assert!(matches!(
            aroon(&bars_hl(&hl), 4),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn macd_identities() {
        let ramp: Vec<f64> = (0..30).map(|i| 100.0 + i as f64).collect();
        let m = macd(&ramp, 12, 26, 9).unwrap();
        for i in 0..30 {
            assert_eq!(m.hist[i], m.macd[i] - m.signal[i]);
        }
        let same = macd(&ramp, 9, 9, 4).unwrap();
        assert!(same
            .macd
            .values()
            .iter()
            .chain(same.signal.values())
            .chain(same.hist.values())
            .all(|&v| v == 0.0));
        let flat = macd(&[4.2; 40], 12, 26, 9).unwrap();
        assert!(flat.macd.values().iter().all(|&v| v == 0.0));
    }
}
