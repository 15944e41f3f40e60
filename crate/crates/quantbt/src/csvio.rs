//! OHLCV CSV files.
//!
//! Header names are matched case-insensitively in any order:
//! `date,open,high,low,close,adj_close,volume` with `adj_close` optional.
//! Row numbers in errors count data rows from 1.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use quantbt_core::market::{Bar, BarDefect, OhlcvSeries};

use crate::error::{AppError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Any invariant violation aborts.
    #[default]
    Strict,
    /// Open/close outside `[low, high]` are clamped and counted.
    Lenient,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    pub mode: ParseMode,
    /// Rescale the bar by `adj_close / close` so the adjusted close drives everything.
    pub use_adjusted: bool,
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub series: OhlcvSeries,
    /// Bars repaired in lenient mode.
    pub warnings: usize,
}

const DATE_FMT: &str = "%Y-%m-%d";

struct Columns {
    date: usize,
    open: usize,
    high: usize,
    low: usize,
    close: usize,
    adj_close: Option<usize>,
    volume: usize,
}

impl Columns {
    fn locate(header: &csv::StringRecord, need_adjusted: bool) -> Result<Self> {
        let find = |name: &str| {
            header
                .iter()
                .position(|h| h.trim().eq_ignore_ascii_case(name))
        };
        let need = |name: &str| find(name).ok_or_else(|| AppError::MissingColumn(name.to_string()));
        let adj_close = find("adj_close").or_else(|| find("adj close"));
        if need_adjusted && adj_close.is_none() {
            return Err(AppError::MissingColumn("adj_close".into()));
        }
        Ok(Self {
            date: need("date")?,
            open: need("open")?,
            high: need("high")?,
            low: need("low")?,
            close: need("close")?,
            adj_close,
            volume: need("volume")?,
        })
    }
}

pub fn parse_csv(path: &Path, opts: ParseOptions) -> Result<Parsed> {
    let file = File::open(path).map_err(|e| AppError::io(path, e))?;
    let symbol = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_reader(file, &symbol, opts)
}

pub fn parse_reader(reader: impl Read, symbol: &str, opts: ParseOptions) -> Result<Parsed> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| AppError::UnparsableRow {
            row: 0,
            reason: e.to_string(),
        })?
        .clone();
    let cols = Columns::locate(&header, opts.use_adjusted)?;
    let mut bars: Vec<Bar> = Vec::new();
    let mut warnings = 0;
    for (k, rec) in rdr.records().enumerate() {
        let row = k + 1;
        let rec = rec.map_err(|e| AppError::UnparsableRow {
            row,
            reason: e.to_string(),
        })?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let mut bar = parse_row(&rec, &cols, row, opts.use_adjusted)?;
        match bar.defect() {
            None => {}
            Some(BarDefect::OutsideRange) if opts.mode == ParseMode::Lenient => {
                bar.clamp_into_range();
                warnings += 1;
            }
            Some(d) => {
                return Err(AppError::InvariantViolation {
                    row,
                    reason: defect_reason(d),
                })
            }
        }
        if let Some(prev) = bars.last() {
            if prev.date >= bar.date {
                return Err(AppError::NonMonotonicDates(row));
            }
        }
        bars.push(bar);
    }
    let series = OhlcvSeries::new(symbol, bars).map_err(|e| match e {
        quantbt_core::Error::EmptySeries => AppError::EmptySeries,
        other => AppError::Domain(other),
    })?;
    Ok(Parsed { series, warnings })
}

fn defect_reason(d: BarDefect) -> &'static str {
    match d {
        BarDefect::NonPositive => "prices must be finite and positive",
        BarDefect::Inverted => "low above high",
        BarDefect::OutsideRange => "open or close outside [low, high]",
    }
}

fn parse_row(
    rec: &csv::StringRecord,
    cols: &Columns,
    row: usize,
    use_adjusted: bool,
) -> Result<Bar> {
    let field = |i: usize, name: &str| {
        rec.get(i).ok_or_else(|| AppError::UnparsableRow {
            row,
            reason: format!("missing `{name}` field"),
        })
    };
    let price = |i: usize, name: &str| -> Result<f64> {
        let s = field(i, name)?;
        s.parse::<f64>().map_err(|_| AppError::UnparsableRow {
            row,
            reason: format!("`{name}` is not a number: {s:?}"),
        })
    };
    let prices = [cols.open, cols.high, cols.low, cols.close];
    if prices.iter().all(|&i| rec.get(i).is_none_or(str::is_empty)) {
        return Err(AppError::UnparsableRow {
            row,
            reason: "all price cells empty".into(),
        });
    }
    let date_s = field(cols.date, "date")?;
    let date =
        NaiveDate::parse_from_str(date_s, DATE_FMT).map_err(|_| AppError::UnparsableRow {
            row,
            reason: format!("date is not YYYY-MM-DD: {date_s:?}"),
        })?;
    let volume_s = field(cols.volume, "volume")?;
    let volume = volume_s
        .parse::<u64>()
        .map_err(|_| AppError::UnparsableRow {
            row,
            reason: format!("volume is not a count: {volume_s:?}"),
        })?;
    let mut bar = Bar {
        date,
        open: price(cols.open, "open")?,
        high: price(cols.high, "high")?,
        low: price(cols.low, "low")?,
        close: price(cols.close, "close")?,
        volume,
    };
    if use_adjusted {
        let adj = price(cols.adj_close.expect("checked with header"), "adj_close")?;
        if bar.close > 0.0 && adj != bar.close {
            let f = adj / bar.close;
            bar.open *= f;
            bar.high *= f;
            bar.low *= f;
            bar.close = adj;
        }
    }
    Ok(bar)
}

/// Writes the canonical CSV layout; `adj_close` repeats `close`.
pub fn write_series(w: impl Write, series: &OhlcvSeries) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| AppError::Io {
        path: "<csv>".into(),
        source: e.into(),
    };
    wtr.write_record([
        "date",
        "open",
        "high",
        "low",
        "close",
        "adj_close",
        "volume",
    ])
    .map_err(io)?;
    for b in series.bars() {
        wtr.write_record([
            b.date.format(DATE_FMT).to_string(),
            b.open.to_string(),
            b.high.to_string(),
            b.low.to_string(),
            b.close.to_string(),
            b.close.to_string(),
            b.volume.to_string(),
        ])
        .map_err(io)?;
    }
    wtr.flush().map_err(|e| AppError::Io {
        path: "<csv>".into(),
        source: e,
    })
}
