//! Parameter grid search over one strategy.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use quantbt_core::backtest::{self, BacktestOptions};
use quantbt_core::market::OhlcvSeries;
use quantbt_core::metrics::MetricReport;
use quantbt_core::strategy::StrategyConfig;
use rayon::prelude::*;
use serde::Deserialize;
use toml::{Table, Value};

use crate::config::{set_path, strategy_from_table, GridAxis};
use crate::error::{AppError, Result};

/// Ranking measure, higher is better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    #[default]
    SharpeAnnual,
    IrAnnual,
    RrWhole,
}

impl Objective {
    pub fn score(&self, r: &MetricReport) -> Option<f64> {
        match self {
            Objective::SharpeAnnual => r.sharpe_annual,
            Objective::IrAnnual => r.ir_annual,
            Objective::RrWhole => Some(r.rr_whole),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Strategy table that grid values are written into.
    pub base: Table,
    /// Axis name (dotted path into `base`) to its values.
    pub axes: BTreeMap<String, Vec<Value>>,
    pub objective: Objective,
    pub min_trades: usize,
}

impl SweepSpec {
    pub fn new(
        base: Table,
        grid: &BTreeMap<String, GridAxis>,
        objective: Objective,
        min_trades: usize,
    ) -> Result<Self> {
        if grid.is_empty() {
            return Err(AppError::InvalidConfig("sweep grid has no axes".into()));
        }
        let axes = grid
            .iter()
            .map(|(k, a)| Ok((k.clone(), a.values(k)?)))
            .collect::<Result<_>>()?;
        Ok(Self {
            base,
            axes,
            objective,
            min_trades,
        })
    }

    /// Every combination, with axes in name order and the last axis varying fastest.
    pub fn cells(&self) -> Vec<Vec<(String, Value)>> {
        let mut out: Vec<Vec<(String, Value)>> = vec![Vec::new()];
        for (name, values) in &self.axes {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |v| {
                        let mut cell = prefix.clone();
                        cell.push((name.clone(), v.clone()));
                        cell
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub params: Vec<(String, Value)>,
    pub strategy: StrategyConfig,
    pub report: MetricReport,
    pub score: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    /// Ranked best first.
    pub rows: Vec<SweepRow>,
    pub cells: usize,
    /// Cells whose parameters were invalid or that failed to run.
    pub skipped: usize,
    /// Cells dropped for trading less than `min_trades`.
    pub filtered: usize,
}

pub fn run_sweep(
    series: &OhlcvSeries,
    benchmark: Option<&[f64]>,
    spec: &SweepSpec,
    trading_days: usize,
) -> Result<SweepOutcome> {
    let cells = spec.cells();
    let opts = BacktestOptions {
        trading_days,
        benchmark,
    };
    let results: Vec<Result<Option<SweepRow>>> = cells
        .into_par_iter()
        .map(|params| {
            let mut table = spec.base.clone();
            for (path, v) in &params {
                set_path(&mut table, path, v.clone())?;
            }
            let strategy = match strategy_from_table(&table) {
                Ok(s) => s,
                Err(AppError::Domain(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            let run = strategy
                .signals(series)
                .and_then(|sig| backtest::run_with(series, &sig, &opts));
            Ok(run.ok().map(|r| SweepRow {
                score: spec.objective.score(&r.report),
                params,
                strategy,
                report: r.report,
            }))
        })
        .collect();
    let total = results.len();
    let ran: Vec<SweepRow> = results
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let skipped = total - ran.len();
    let mut rows: Vec<SweepRow> = ran
        .into_iter()
        .filter(|r| r.report.buy_count >= spec.min_trades)
        .collect();
    let filtered = total - skipped - rows.len();
    if rows.is_empty() {
        return Err(AppError::EmptyGridAfterFilter(spec.min_trades));
    }
    rows.sort_by(rank);
    Ok(SweepOutcome {
        rows,
        cells: total,
        skipped,
        filtered,
    })
}

/// Score descending (undefined scores last), then parameters ascending.
fn rank(a: &SweepRow, b: &SweepRow) -> Ordering {
    let by_score = match (a.score, b.score) {
        (Some(x), Some(y)) => y.total_cmp(&x),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    };
    by_score.then_with(|| {
        a.params
            .iter()
            .zip(&b.params)
            .map(|((_, x), (_, y))| cmp_values(x, y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

fn cmp_values(a: &Value, b: &Value) -> Ordering {
    let num = |v: &Value| v.as_float().or_else(|| v.as_integer().map(|i| i as f64));
    match (num(a), num(b)) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        _ => a.to_string().cmp(&b.to_string()),
    }
}
