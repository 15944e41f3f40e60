//! The `quantbt` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use quantbt_core::backtest::{self, BacktestOptions};
use quantbt_core::kelly::{self, KellyParams};
use quantbt_core::market::OhlcvSeries;
use quantbt_core::metrics::MetricReport;
use quantbt_core::TRADING_DAYS;
use serde_json::json;
use toml::Table;

use crate::config::{parse_assignment, set_path, strategy_from_table, FileConfig};
use crate::csvio::{self, ParseMode, ParseOptions, Parsed};
use crate::error::{AppError, Result};
use crate::export;
use crate::indspec::IndicatorSpec;
use crate::sweep::{run_sweep, Objective, SweepSpec};

#[derive(Debug, Parser)]
#[command(
    name = "quantbt",
    version,
    about = "Deterministic technical-analysis backtester"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// OHLCV CSV file
    #[arg(long, global = true)]
    pub data: Option<PathBuf>,
    /// TOML experiment file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for output files [default: quantbt-out]
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Bars per year for annualization and yearly returns [default: 252]
    #[arg(long, global = true)]
    pub trading_days: Option<usize>,
    /// Abort on any bar invariant violation (default)
    #[arg(long, global = true, overrides_with = "lenient")]
    pub strict: bool,
    /// Clamp open/close into [low, high] instead of aborting
    #[arg(long, global = true, overrides_with = "strict")]
    pub lenient: bool,
    /// Price everything off the adjusted close
    #[arg(long, global = true)]
    pub use_adjusted: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a CSV and write its normalized form
    Ingest,
    /// Dump indicator columns aligned with the closes
    Indicators {
        /// Indicator spec such as sma:50, ema:50, ama:51:5:12:2, rsi:14, macd:12:26:9 (repeatable)
        #[arg(long = "ind")]
        ind: Vec<String>,
    },
    /// Run one strategy and write report.json, equity.csv and signals.csv
    Backtest {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Rank a parameter grid and write sweep.csv
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum)]
        objective: Option<Objective>,
        #[arg(long)]
        min_trades: Option<usize>,
    },
    /// Kelly optimum and expected log-return curve
    Kelly {
        /// Win probability
        #[arg(long)]
        p: Option<f64>,
        /// Gain multiple L on a win
        #[arg(long)]
        gain: Option<f64>,
        /// Loss multiple M on a loss
        #[arg(long)]
        loss: Option<f64>,
        #[arg(long)]
        grid_points: Option<usize>,
    },
    /// Print a saved report.json as a text block or JSON
    Report {
        /// Report file [default: <out-dir>/report.json]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Benchmark CSV for the information ratio [default: the data itself]
    #[arg(long)]
    pub benchmark: Option<PathBuf>,
    /// Strategy parameter override, e.g. kind=two_average or fast.period=5 (repeatable)
    #[arg(long = "set")]
    pub set: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

/// Flags merged over the config file.
struct Settings {
    file: FileConfig,
    data: Option<PathBuf>,
    out_dir: PathBuf,
    trading_days: usize,
    parse: ParseOptions,
}

impl Settings {
    fn resolve(g: &GlobalArgs) -> Result<Self> {
        let file = match &g.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let trading_days = g.trading_days.or(file.trading_days).unwrap_or(TRADING_DAYS);
        if trading_days == 0 {
            return Err(AppError::Usage("--trading-days must be at least 1".into()));
        }
        let strict = if g.lenient {
            false
        } else if g.strict {
            true
        } else {
            file.strict.unwrap_or(true)
        };
        let parse = ParseOptions {
            mode: if strict {
                ParseMode::Strict
            } else {
                ParseMode::Lenient
            },
            use_adjusted: g.use_adjusted || file.use_adjusted.unwrap_or(false),
        };
        Ok(Self {
            data: g.data.clone().or_else(|| file.data.clone()),
            out_dir: g
                .out_dir
                .clone()
                .or_else(|| file.out_dir.clone())
                .unwrap_or_else(|| "quantbt-out".into()),
            trading_days,
            parse,
            file,
        })
    }

    fn load_data(&self) -> Result<Parsed> {
        let path = self
            .data
            .as_ref()
            .ok_or_else(|| AppError::Usage("no input: pass --data or set `data`".into()))?;
        csvio::parse_csv(path, self.parse)
    }

    fn benchmark(&self, flag: &Option<PathBuf>, series: &OhlcvSeries) -> Result<Option<Vec<f64>>> {
        let Some(path) = flag.clone().or_else(|| self.file.benchmark.clone()) else {
            return Ok(None);
        };
        let bench = csvio::parse_csv(&path, self.parse)?.series;
        if bench.len() != series.len() {
            return Err(AppError::BenchmarkMismatch(format!(
                "{} bars vs {}",
                bench.len(),
                series.len()
            )));
        }
        if let Some(i) = (0..series.len()).find(|&i| bench.bars()[i].date != series.bars()[i].date)
        {
            return Err(AppError::BenchmarkMismatch(format!(
                "dates differ at bar {i}"
            )));
        }
        Ok(Some(bench.closes()))
    }

    fn strategy_table(&self, set: &[String]) -> Result<Table> {
        let mut table = self.file.strategy.clone().unwrap_or_default();
        for a in set {
            let (k, v) = parse_assignment(a)?;
            set_path(&mut table, &k, v)?;
        }
        if table.is_empty() {
            return Err(AppError::Usage(
                "no strategy: add a [strategy] table or --set kind=...".into(),
            ));
        }
        Ok(table)
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out_dir).map_err(|e| AppError::Io {
            path: self.out_dir.clone(),
            source: e,
        })?;
        let path = self.out_dir.join(name);
        fs::write(&path, contents).map_err(|e| AppError::Io {
            path: path.clone(),
            source: e,
        })?;
        Ok(path)
    }
}

/// Runs a parsed command line, writing its primary output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let s = Settings::resolve(&cli.global)?;
    let text = match &cli.command {
        Command::Ingest => ingest(&s)?,
        Command::Indicators { ind } => indicators(&s, ind)?,
        Command::Backtest { run } => backtest_cmd(&s, run)?,
        Command::Sweep {
            run,
            objective,
            min_trades,
        } => sweep_cmd(&s, run, *objective, *min_trades)?,
        Command::Kelly {
            p,
            gain,
            loss,
            grid_points,
        } => kelly_cmd(&s, *p, *gain, *loss, *grid_points)?,
        Command::Report { file, format } => report_cmd(&s, file.as_deref(), *format)?,
    };
    out.write_all(text.as_bytes()).map_err(|e| AppError::Io {
        path: "<stdout>".into(),
        source: e,
    })
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn ingest(s: &Settings) -> Result<String> {
    let parsed = s.load_data()?;
    let series = &parsed.series;
    let mut buf = Vec::new();
    csvio::write_series(&mut buf, series)?;
    let name = format!("{}.csv", series.symbol());
    s.write(&name, std::str::from_utf8(&buf).expect("csv is utf-8"))?;
    let bars = series.bars();
    Ok(pretty(&json!({
        "symbol": series.symbol(),
        "bars": series.len(),
        "first_date": bars[0].date.to_string(),
        "last_date": bars[bars.len() - 1].date.to_string(),
        "warnings": parsed.warnings,
        "output": name,
    })))
}

fn indicators(s: &Settings, flags: &[String]) -> Result<String> {
    let specs: Vec<String> = if flags.is_empty() {
        s.file.indicators.clone().unwrap_or_default()
    } else {
        flags.to_vec()
    };
    if specs.is_empty() {
        return Err(AppError::Usage(
            "no indicators: pass --ind or set `indicators`".into(),
        ));
    }
    let specs = specs
        .iter()
        .map(|t| t.parse::<IndicatorSpec>())
        .collect::<Result<Vec<_>>>()?;
    let series = s.load_data()?.series;
    let mut columns = Vec::new();
    for spec in &specs {
        columns.extend(spec.columns(&series)?);
    }
    let names: Vec<&str> = columns.iter().map(|c| c.0.as_str()).collect();
    let summary =
        pretty(&json!({ "rows": series.len(), "columns": names, "output": "indicators.csv" }));
    s.write(
        "indicators.csv",
        &export::indicators_csv(&series.closes(), &columns),
    )?;
    Ok(summary)
}

fn backtest_cmd(s: &Settings, args: &RunArgs) -> Result<String> {
    let series = s.load_data()?.series;
    let strategy = strategy_from_table(&s.strategy_table(&args.set)?)?;
    let bench = s.benchmark(&args.benchmark, &series)?;
    let signals = strategy.signals(&series)?;
    let opts = BacktestOptions {
        trading_days: s.trading_days,
        benchmark: bench.as_deref(),
    };
    let result = backtest::run_with(&series, &signals, &opts)?;
    let report = export::report_json(&result.report);
    s.write("report.json", &report)?;
    s.write(
        "equity.csv",
        &export::equity_csv(&result.equity, &series.closes()),
    )?;
    s.write("signals.csv", &export::signals_csv(&signals))?;
    Ok(report)
}

fn sweep_cmd(
    s: &Settings,
    args: &RunArgs,
    objective: Option<Objective>,
    min_trades: Option<usize>,
) -> Result<String> {
    let section = s.file.sweep.clone().unwrap_or_default();
    let spec = SweepSpec::new(
        s.strategy_table(&args.set)?,
        &section.grid,
        objective.or(section.objective).unwrap_or_default(),
        min_trades.or(section.min_trades).unwrap_or(0),
    )?;
    let series = s.load_data()?.series;
    let bench = s.benchmark(&args.benchmark, &series)?;
    let outcome = run_sweep(&series, bench.as_deref(), &spec, s.trading_days)?;
    let table = export::sweep_csv(&outcome.rows);
    s.write("sweep.csv", &table)?;
    Ok(table)
}

fn kelly_cmd(
    s: &Settings,
    p: Option<f64>,
    gain: Option<f64>,
    loss: Option<f64>,
    points: Option<usize>,
) -> Result<String> {
    let k = s.file.kelly.clone().unwrap_or_default();
    let need = |flag: Option<f64>, file: Option<f64>, name: &str| {
        flag.or(file)
            .ok_or_else(|| AppError::Usage(format!("kelly needs --{name}")))
    };
    let params = KellyParams::new(
        need(p, k.p, "p")?,
        need(gain, k.gain, "gain")?,
        need(loss, k.loss, "loss")?,
    )?;
    let curve = kelly::kelly_curve(&params, points.or(k.grid_points).unwrap_or(101))?;
    let x = kelly::optimal_fraction(&params);
    let growth = kelly::expected_log_return(x, &params).ok();
    let argmax = curve
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|c| c.0);
    s.write("kelly_curve.csv", &export::kelly_csv(&curve))?;
    Ok(pretty(&json!({
        "p": params.p(),
        "l_gain": params.l_gain(),
        "m_loss": params.m_loss(),
        "optimal_fraction": x,
        "expected_log_return": growth,
        "grid_argmax": argmax,
        "grid_points": curve.len(),
        "output": "kelly_curve.csv",
    })))
}

fn report_cmd(s: &Settings, file: Option<&Path>, format: ReportFormat) -> Result<String> {
    let path = file
        .map(Path::to_path_buf)
        .unwrap_or_else(|| s.out_dir.join("report.json"));
    let text = fs::read_to_string(&path).map_err(|e| AppError::io(&path, e))?;
    let report: MetricReport =
        serde_json::from_str(&text).map_err(|e| AppError::UnparsableRow {
            row: e.line(),
            reason: format!("{}: {e}", path.display()),
        })?;
    Ok(match format {
        ReportFormat::Text => export::report_text(&report),
        ReportFormat::Json => export::report_json(&report),
    })
}

/// Entry point: parses `args`, runs, and returns the process exit code.
/// Errors go to stderr as a JSON object with a `kind` field.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let v = json!({ "kind": "Usage", "message": e.to_string().trim_end(), "exit_code": 2 });
            let _ = writeln!(err, "{v}");
            return 2;
        }
    };
    match run(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_json());
            e.exit_code()
        }
    }
}
