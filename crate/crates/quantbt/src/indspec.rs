//! Compact indicator specs for the column dump, e.g. `sma:50` or `ama:51:5:12:2`.

use std::fmt;
use std::str::FromStr;

use quantbt_core::indicators::{self, AmaParams, AmaType, MaSpec};
use quantbt_core::market::OhlcvSeries;

use crate::error::{AppError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum IndicatorSpec {
    Ma(MaSpec),
    Er(usize),
    Rsi(usize),
    Rmi(usize, usize),
    Atr(usize),
    Aroon(usize),
    Macd(usize, usize, usize),
    Bollinger(usize, f64),
    Keltner(usize, f64),
}

impl FromStr for IndicatorSpec {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || AppError::Usage(format!("bad indicator spec `{s}`"));
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or("").to_ascii_lowercase();
        let args: Vec<&str> = parts.collect();
        let int = |k: usize| {
            args.get(k)
                .and_then(|a| a.parse::<usize>().ok())
                .ok_or_else(bad)
        };
        let real = |k: usize| {
            args.get(k)
                .and_then(|a| a.parse::<f64>().ok())
                .ok_or_else(bad)
        };
        let arity = |lo: usize, hi: usize| {
            if (lo..=hi).contains(&args.len()) {
                Ok(())
            } else {
                Err(bad())
            }
        };
        let spec = match name.as_str() {
            "sma" => {
                arity(1, 1)?;
                IndicatorSpec::Ma(MaSpec::sma(int(0)?))
            }
            "ema" => {
                arity(1, 2)?;
                let smoothing = if args.len() == 2 {
                    real(1)?
                } else {
                    indicators::DEFAULT_SMOOTHING
                };
                IndicatorSpec::Ma(MaSpec::Ema {
                    period: int(0)?,
                    smoothing,
                })
            }
            "ama" => {
                arity(4, 4)?;
                let matype = AmaType::try_from(u8::try_from(int(3)?).map_err(|_| bad())?)?;
                IndicatorSpec::Ma(MaSpec::Ama(AmaParams::new(
                    int(0)?,
                    int(1)?,
                    int(2)?,
                    matype,
                )?))
            }
            "er" => {
                arity(1, 1)?;
                IndicatorSpec::Er(int(0)?)
            }
            "rsi" => {
                arity(1, 1)?;
                IndicatorSpec::Rsi(int(0)?)
            }
            "rmi" => {
                arity(2, 2)?;
                IndicatorSpec::Rmi(int(0)?, int(1)?)
            }
            "atr" => {
                arity(1, 1)?;
                IndicatorSpec::Atr(int(0)?)
            }
            "aroon" => {
                arity(1, 1)?;
                IndicatorSpec::Aroon(int(0)?)
            }
            "macd" => {
                arity(3, 3)?;
                IndicatorSpec::Macd(int(0)?, int(1)?, int(2)?)
            }
            "bollinger" => {
                arity(2, 2)?;
                IndicatorSpec::Bollinger(int(0)?, real(1)?)
            }
            "keltner" => {
                arity(2, 2)?;
                IndicatorSpec::Keltner(int(0)?, real(1)?)
            }
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

impl fmt::Display for IndicatorSpec {
    /// Column-name stem: the spec with `:` replaced by `_`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndicatorSpec::Ma(MaSpec::Sma { period }) => write!(f, "sma_{period}"),
            IndicatorSpec::Ma(MaSpec::Ema { period, smoothing })
                if *smoothing == indicators::DEFAULT_SMOOTHING =>
            {
                write!(f, "ema_{period}")
            }
            IndicatorSpec::Ma(MaSpec::Ema { period, smoothing }) => {
                write!(f, "ema_{period}_{smoothing}")
            }
            IndicatorSpec::Ma(MaSpec::Ama(p)) => {
                write!(
                    f,
                    "ama_{}_{}_{}_{}",
                    p.long,
                    p.short,
                    p.ada_win,
                    u8::from(p.matype)
                )
            }
            IndicatorSpec::Er(m) => write!(f, "er_{m}"),
            IndicatorSpec::Rsi(n) => write!(f, "rsi_{n}"),
            IndicatorSpec::Rmi(n, m) => write!(f, "rmi_{n}_{m}"),
            IndicatorSpec::Atr(n) => write!(f, "atr_{n}"),
            IndicatorSpec::Aroon(n) => write!(f, "aroon_{n}"),
            IndicatorSpec::Macd(a, b, c) => write!(f, "macd_{a}_{b}_{c}"),
            IndicatorSpec::Bollinger(n, d) => write!(f, "bollinger_{n}_{d}"),
            IndicatorSpec::Keltner(n, m) => write!(f, "keltner_{n}_{m}"),
        }
    }
}

impl IndicatorSpec {
    /// Named output columns aligned with the series.
    pub fn columns(&self, series: &OhlcvSeries) -> Result<Vec<(String, Vec<f64>)>> {
        let stem = self.to_string();
        let close = series.closes();
        let one = |v: indicators::IndicatorSeries| vec![(stem.clone(), v.into_values())];
        let three = |names: [&str; 3], v: [indicators::IndicatorSeries; 3]| {
            names
                .iter()
                .zip(v)
                .map(|(n, s)| (format!("{stem}_{n}"), s.into_values()))
                .collect()
        };
        Ok(match *self {
            IndicatorSpec::Ma(ma) => one(ma.apply(&close)?),
            IndicatorSpec::Er(m) => one(indicators::efficiency_ratio(&close, m)?),
            IndicatorSpec::Rsi(n) => one(indicators::rsi(&close, n)?),
            IndicatorSpec::Rmi(n, m) => one(indicators::rmi(&close, n, m)?),
            IndicatorSpec::Atr(n) => one(indicators::atr(series.bars(), n)?),
            IndicatorSpec::Aroon(n) => {
                let l = indicators::aroon(series.bars(), n)?;
                three(["up", "down", "osc"], [l.up, l.down, l.osc])
            }
            IndicatorSpec::Macd(a, b, c) => {
                let l = indicators::macd(&close, a, b, c)?;
                three(["line", "signal", "hist"], [l.macd, l.signal, l.hist])
            }
            IndicatorSpec::Bollinger(n, d) => {
                let b = indicators::bollinger(series.bars(), &MaSpec::sma(n), d)?;
                three(["middle", "upper", "lower"], [b.middle, b.upper, b.lower])
            }
            IndicatorSpec::Keltner(n, m) => {
                let b = indicators::keltner(series.bars(), &MaSpec::sma(n), m, None)?;
                three(["middle", "upper", "lower"], [b.middle, b.upper, b.lower])
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_name() {
        for s in [
            "sma:50",
            "ema:50",
            "ama:51:5:12:2",
            "rmi:14:5",
            "macd:12:26:9",
            "bollinger:20:2",
        ] {
            let spec: IndicatorSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s.replace(':', "_"));
        }
        assert_eq!(
            "ema:10:3".parse::<IndicatorSpec>().unwrap().to_string(),
            "ema_10_3"
        );
        for s in [
            "sma",
            "sma:x",
            "sma:5:5",
            "ama:5:6:3:1",
            "ama:51:5:12:9",
            "wma:5",
        ] {
            assert!(s.parse::<IndicatorSpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn multi_column_outputs() {
        let s =
            OhlcvSeries::from_closes("C", &(1..=40).map(f64::from).collect::<Vec<_>>()).unwrap();
        let cols = "macd:3:6:2"
            .parse::<IndicatorSpec>()
            .unwrap()
            .columns(&s)
            .unwrap();
        let names: Vec<&str> = cols.iter().map(|c| c.0.as_str()).collect();
        assert_eq!(
            names,
            ["macd_3_6_2_line", "macd_3_6_2_signal", "macd_3_6_2_hist"]
        );
        assert!(cols.iter().all(|c| c.1.len() == 40));
    }
}
