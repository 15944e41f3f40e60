//! Output file formats. Numbers use the shortest representation that parses
//! back to the same `f64`, so every file is byte-stable and round-trips.

use std::fmt::Write as _;

use quantbt_core::backtest::EquityCurve;
use quantbt_core::metrics::MetricReport;
use quantbt_core::strategy::SignalEvent;
use toml::Value;

use crate::sweep::SweepRow;

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// `index,close,<columns…>`
pub fn indicators_csv(close: &[f64], columns: &[(String, Vec<f64>)]) -> String {
    let mut s = String::from("index,close");
    for (name, _) in columns {
        s.push(',');
        s.push_str(name);
    }
    s.push('\n');
    for (i, c) in close.iter().enumerate() {
        let _ = write!(s, "{i},{c}");
        for (_, v) in columns {
            let _ = write!(s, ",{}", v[i]);
        }
        s.push('\n');
    }
    s
}

/// `bar_index,action`
pub fn signals_csv(signals: &[SignalEvent]) -> String {
    let mut s = String::from("bar_index,action\n");
    for e in signals {
        let _ = writeln!(s, "{},{}", e.bar_index, e.action.as_str());
    }
    s
}

/// `bar_index,equity,close`
pub fn equity_csv(equity: &EquityCurve, close: &[f64]) -> String {
    let mut s = String::from("bar_index,equity,close\n");
    for (i, (e, c)) in equity.values.iter().zip(close).enumerate() {
        let _ = writeln!(s, "{i},{e},{c}");
    }
    s
}

/// `x,expected_log_return`
pub fn kelly_csv(curve: &[(f64, f64)]) -> String {
    let mut s = String::from("x,expected_log_return\n");
    for (x, g) in curve {
        let _ = writeln!(s, "{x},{g}");
    }
    s
}

pub fn report_json(report: &MetricReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// One row per cell, best first.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("rank");
    if let Some(first) = rows.first() {
        for (name, _) in &first.params {
            let _ = write!(s, ",{name}");
        }
    }
    s.push_str(",buy_count,rr_whole,rr_per_year,mdd,sr,ir,objective\n");
    for (k, row) in rows.iter().enumerate() {
        let _ = write!(s, "{}", k + 1);
        for (_, v) in &row.params {
            let cell = match v {
                Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            let _ = write!(s, ",{cell}");
        }
        let r = &row.report;
        let _ = writeln!(
            s,
            ",{},{},{},{},{},{},{}",
            r.buy_count,
            r.rr_whole,
            r.rr_per_year_geometric,
            r.mdd,
            opt(r.sharpe_annual),
            opt(r.ir_annual),
            opt(row.score)
        );
    }
    s
}

/// The plain-text measure block.
pub fn report_text(r: &MetricReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Initial Price: {}", r.initial_price);
    let _ = writeln!(s, "Final Price: {}", r.final_price);
    let _ = writeln!(s, "RR: {}", r.rr_whole);
    let _ = writeln!(s, "RR/year: {}", r.rr_per_year_geometric);
    for (k, rr) in r.rr_by_year.iter().enumerate() {
        let _ = writeln!(s, "RR of year-{}: {}", k + 1, rr);
    }
    let _ = writeln!(s, "Total number of buy count: {}", r.buy_count);
    let _ = writeln!(s, "Max Rate: {}", r.max_year_rr);
    let _ = writeln!(s, "Min Rate: {}", r.min_year_rr);
    let _ = writeln!(s, "MDD: {}", r.mdd);
    let _ = writeln!(s, "SR: {}", opt_text(r.sharpe_annual));
    let _ = writeln!(s, "IR: {}", opt_text(r.ir_annual));
    let _ = writeln!(s, "VOL: {}", opt_text(r.vol_annual));
    s
}

fn opt_text(x: Option<f64>) -> String {
    x.map_or_else(|| "undefined".into(), |v| v.to_string())
}
