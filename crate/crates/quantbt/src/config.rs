//! Experiment manifests (TOML).
//!
//! ```toml
//! data = "spx.csv"            # paths are relative to this file
//! trading_days = 252
//! strict = true
//! use_adjusted = false
//! benchmark = "spx.csv"       # omitted: the data series itself
//! indicators = ["sma:50", "ema:50", "ama:51:5:12:2"]
//!
//! [strategy]
//! kind = "price_cross"
//! ma = { kind = "ama", long = 51, short = 5, ada_win = 12, matype = 2 }
//!
//! [sweep]
//! objective = "sharpe_annual" # or "ir_annual", "rr_whole"
//! min_trades = 5
//! [sweep.grid]
//! "ma.long" = { start = 30, end = 60, step = 3 }
//! "ma.short" = [3, 5, 8]
//!
//! [kelly]
//! p = 0.9
//! gain = 1.1
//! loss = 1.0
//! grid_points = 101
//! ```
//!
//! Command-line flags override anything set here.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use quantbt_core::strategy::StrategyConfig;
use serde::Deserialize;
use toml::{Table, Value};

use crate::error::{AppError, Result};
use crate::sweep::Objective;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub data: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub trading_days: Option<usize>,
    pub strict: Option<bool>,
    pub use_adjusted: Option<bool>,
    pub benchmark: Option<PathBuf>,
    pub indicators: Option<Vec<String>>,
    pub strategy: Option<Table>,
    pub sweep: Option<SweepSection>,
    pub kelly: Option<KellySection>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub objective: Option<Objective>,
    pub min_trades: Option<usize>,
    #[serde(default)]
    pub grid: BTreeMap<String, GridAxis>,
}

/// Either an explicit value list or an inclusive range.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridAxis {
    Values(Vec<Value>),
    Range {
        start: Value,
        end: Value,
        step: Option<Value>,
    },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KellySection {
    pub p: Option<f64>,
    pub gain: Option<f64>,
    pub loss: Option<f64>,
    pub grid_points: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        let mut cfg: FileConfig =
            toml::from_str(&text).map_err(|e| AppError::InvalidConfig(e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.data, &mut cfg.out_dir, &mut cfg.benchmark]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

impl GridAxis {
    /// The axis values in ascending grid order.
    pub fn values(&self, name: &str) -> Result<Vec<Value>> {
        let bad = |why: &str| AppError::InvalidConfig(format!("sweep axis `{name}`: {why}"));
        let vals = match self {
            GridAxis::Values(v) => v.clone(),
            GridAxis::Range { start, end, step } => match (start, end, step) {
                (Value::Integer(a), Value::Integer(b), None | Some(Value::Integer(_))) => {
                    let s = match step {
                        Some(Value::Integer(s)) => *s,
                        _ => 1,
                    };
                    if s <= 0 {
                        return Err(bad("step must be positive"));
                    }
                    (*a..=*b).step_by(s as usize).map(Value::Integer).collect()
                }
                _ => {
                    let num = |v: &Value| v.as_float().or_else(|| v.as_integer().map(|i| i as f64));
                    let (a, b) = num(start)
                        .zip(num(end))
                        .ok_or_else(|| bad("start/end must be numbers"))?;
                    let s = step
                        .as_ref()
                        .map_or(Some(1.0), num)
                        .ok_or_else(|| bad("step must be a number"))?;
                    if s.is_nan() || s <= 0.0 {
                        return Err(bad("step must be positive"));
                    }
                    let n = ((b - a) / s + 1e-9).floor();
                    if n < 0.0 {
                        Vec::new()
                    } else {
                        (0..=n as usize)
                            .map(|k| Value::Float(a + k as f64 * s))
                            .collect()
                    }
                }
            },
        };
        if vals.is_empty() {
            return Err(bad("no values"));
        }
        Ok(vals)
    }
}

/// Sets a dotted `path` (e.g. `ma.long`) inside a table, creating tables on the way.
pub fn set_path(table: &mut Table, path: &str, value: Value) -> Result<()> {
    let mut parts = path.split('.').peekable();
    let mut cur = table;
    while let Some(key) = parts.next() {
        if key.is_empty() {
            return Err(AppError::InvalidConfig(format!(
                "bad parameter path `{path}`"
            )));
        }
        if parts.peek().is_none() {
            cur.insert(key.to_string(), value);
            return Ok(());
        }
        let entry = cur
            .entry(key.to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        cur = entry.as_table_mut().ok_or_else(|| {
            AppError::InvalidConfig(format!("`{key}` in `{path}` is not a table"))
        })?;
    }
    Ok(())
}

/// Parses `key=value`, reading the value as TOML and falling back to a bare string.
pub fn parse_assignment(s: &str) -> Result<(String, Value)> {
    let (key, raw) = s
        .split_once('=')
        .ok_or_else(|| AppError::Usage(format!("expected key=value, got `{s}`")))?;
    let raw = raw.trim();
    let value = toml::from_str::<Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()));
    Ok((key.trim().to_string(), value))
}

pub fn strategy_from_table(table: &Table) -> Result<StrategyConfig> {
    let cfg: StrategyConfig =
        Value::Table(table.clone())
            .try_into()
            .map_err(|e: toml::de::Error| {
                AppError::InvalidConfig(format!("strategy: {}", e.message()))
            })?;
    cfg.validate()?;
    Ok(cfg)
}
