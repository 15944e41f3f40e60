mod common;

use common::{closes_csv, data, qbt, qbt_env, write};
use quantbt::csvio::{parse_csv, ParseOptions};
use quantbt_core::backtest;
use quantbt_core::indicators::{AmaParams, AmaType, MaSpec};
use quantbt_core::strategy::StrategyConfig;
use serde_json::Value;
use tempfile::tempdir;

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn ingest_normalizes_and_summarizes() {
    let dir = tempdir().unwrap();
    let r = qbt(&[
        "--data",
        data("regime.csv").to_str().unwrap(),
        "--out-dir",
        dir.path().to_str().unwrap(),
        "ingest",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r.stdout);
    assert_eq!(v["bars"], 450);
    assert_eq!(v["warnings"], 0);
    assert_eq!(v["first_date"], "2015-01-05");
    let original = parse_csv(&data("regime.csv"), ParseOptions::default())
        .unwrap()
        .series;
    let written = parse_csv(&dir.path().join("regime.csv"), ParseOptions::default())
        .unwrap()
        .series;
    assert_eq!(original.bars(), written.bars());
}

#[test]
fn strict_and_lenient_modes() {
    let dir = tempdir().unwrap();
    let csv = "date,open,high,low,close,adj_close,volume\n\
        2020-01-02,10,11,9,10.5,10.5,100\n\
        2020-01-03,10.5,12,10,12.5,12.5,200\n\
        2020-01-06,11,11.5,10.2,11.2,11.2,150\n";
    let f = write(dir.path(), "bad.csv", csv);
    let out = dir.path().join("out");
    let args = |mode: &str| {
        vec![
            "--data".into(),
            f.clone().into_os_string(),
            "--out-dir".into(),
            out.clone().into_os_string(),
            mode.into(),
            "ingest".into(),
        ]
    };
    let strict = qbt(&args("--strict"));
    assert_eq!(strict.code, 2);
    let e = strict.error_json();
    assert_eq!(
        (e["kind"].as_str(), e["row"].as_u64()),
        (Some("InvariantViolation"), Some(2))
    );
    let lenient = qbt(&args("--lenient"));
    assert_eq!(lenient.code, 0, "{}", lenient.stderr);
    assert_eq!(json(&lenient.stdout)["warnings"], 1);
    let fixed = parse_csv(&out.join("bad.csv"), ParseOptions::default())
        .unwrap()
        .series;
    assert_eq!(fixed.bars()[1].close, 12.0);
}

#[test]
fn missing_input_is_exit_2() {
    let r = qbt(&["--data", "/nonexistent/prices.csv", "ingest"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.error_json()["kind"], "MissingInput");
    let r = qbt(&["ingest"]);
    assert_eq!(
        (r.code, r.error_json()["kind"].as_str()),
        (2, Some("Usage"))
    );
    let r = qbt(&["frobnicate"]);
    assert_eq!(
        (r.code, r.error_json()["kind"].as_str()),
        (2, Some("Usage"))
    );
}

#[test]
fn domain_errors_are_exit_3() {
    let dir = tempdir().unwrap();
    let f = write(dir.path(), "short.csv", &closes_csv(&[1.0, 2.0, 3.0, 4.0]));
    let r = qbt(&[
        "--data",
        f.to_str().unwrap(),
        "--out-dir",
        dir.path().to_str().unwrap(),
        "backtest",
        "--set",
        "kind=rsi",
    ]);
    assert_eq!(r.code, 3);
    assert_eq!(r.error_json()["kind"], "TooShort");
    let r = qbt(&[
        "kelly",
        "--p",
        "1.5",
        "--gain",
        "1",
        "--loss",
        "1",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(
        (r.code, r.error_json()["kind"].as_str()),
        (3, Some("InvalidParams"))
    );
}

#[test]
fn bad_config_is_exit_2() {
    let dir = tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "[strategy]\nkind = \"two_average\"\nfast = 3\n",
    );
    let r = qbt(&[
        "--config",
        cfg.to_str().unwrap(),
        "--data",
        data("v.csv").to_str().unwrap(),
        "backtest",
    ]);
    assert_eq!(
        (r.code, r.error_json()["kind"].as_str()),
        (2, Some("InvalidConfig"))
    );
}

#[test]
fn buy_and_hold_returns_last_over_first() {
    let dir = tempdir().unwrap();
    let r = qbt(&[
        "--data",
        data("regime.csv").to_str().unwrap(),
        "--out-dir",
        dir.path().to_str().unwrap(),
        "backtest",
        "--set",
        "kind=buy_and_hold",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let c = parse_csv(&data("regime.csv"), ParseOptions::default())
        .unwrap()
        .series
        .closes();
    let rep = json(&r.stdout);
    assert_eq!(rep["rr_whole"].as_f64().unwrap(), c[c.len() - 1] / c[0]);
    assert_eq!(rep["buy_count"], 1);
    let sig = std::fs::read_to_string(dir.path().join("signals.csv")).unwrap();
    assert_eq!(sig, "bar_index,action\n0,buy\n");
    let eq = std::fs::read_to_string(dir.path().join("equity.csv")).unwrap();
    assert!(eq.starts_with("bar_index,equity,close\n0,"));
    assert_eq!(eq.lines().count(), 451);
}

#[test]
fn v_fixture_report_matches_golden_and_oracle() {
    let dir = tempdir().unwrap();
    let r = qbt(&[
        "--config",
        data("v_two_average.toml").to_str().unwrap(),
        "--out-dir",
        dir.path().to_str().unwrap(),
        "backtest",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let golden = std::fs::read_to_string(data("v_report.golden.json")).unwrap();
    assert_eq!(
        std::fs::read_to_string(dir.path().join("report.json")).unwrap(),
        golden
    );
    assert_eq!(r.stdout, golden);

    let got = json(&golden);
    let oracle = json(&std::fs::read_to_string(data("v_report.oracle.json")).unwrap());
    let obj = oracle.as_object().unwrap();
    assert_eq!(obj.len(), got.as_object().unwrap().len());
    for (k, want) in obj {
        let have = &got[k];
        let pairs: Vec<(f64, f64)> = match want {
            Value::Array(w) => w
                .iter()
                .zip(have.as_array().unwrap())
                .map(|(a, b)| (a.as_f64().unwrap(), b.as_f64().unwrap()))
                .collect(),
            _ => vec![(want.as_f64().unwrap(), have.as_f64().unwrap())],
        };
        for (a, b) in pairs {
            assert!(
                (a - b).abs() <= 1e-12 * a.abs().max(1.0),
                "{k}: oracle {a} vs {b}"
            );
        }
    }
}

#[test]
fn flags_override_config() {
    let dir = tempdir().unwrap();
    let base = [
        "--config",
        data("v_two_average.toml")
            .to_str()
            .unwrap()
            .to_owned()
            .leak(),
        "--out-dir",
        dir.path().to_str().unwrap().to_owned().leak(),
    ];
    let r = qbt(&[&base[..], &["--trading-days", "100", "backtest"]].concat());
    assert_eq!(json(&r.stdout)["rr_by_year"].as_array().unwrap().len(), 3);
    let r = qbt(&[&base[..], &["backtest", "--set", "slow.period=20"]].concat());
    let s = parse_csv(&data("v.csv"), ParseOptions::default())
        .unwrap()
        .series;
    let cfg = StrategyConfig::TwoAverage {
        fast: MaSpec::sma(3),
        slow: MaSpec::sma(20),
    };
    let direct = backtest::run(&s, &cfg.signals(&s).unwrap()).unwrap();
    assert_eq!(
        json(&r.stdout)["buy_count"].as_u64().unwrap() as usize,
        direct.report.buy_count
    );
}

#[test]
fn report_renders_text_block() {
    let dir = tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    qbt(&[
        "--config",
        data("v_two_average.toml").to_str().unwrap(),
        "--out-dir",
        out,
        "backtest",
    ]);
    let r = qbt(&["--out-dir", out, "report"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("Initial Price: 141.1425\n"));
    assert!(r.stdout.contains("RR of year-2: "));
    assert!(r.stdout.contains("Total number of buy count: 15\n"));
    let j = qbt(&["--out-dir", out, "report", "--format", "json"]);
    assert_eq!(
        j.stdout,
        std::fs::read_to_string(data("v_report.golden.json")).unwrap()
    );
    let missing = qbt(&["report", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(missing.error_json()["kind"], "MissingInput");
}

fn sweep_config(dir: &std::path::Path, grid: &str, min_trades: usize) -> std::path::PathBuf {
    let body = format!(
        "data = {:?}\n[strategy]\nkind = \"price_cross\"\nma = {{ kind = \"sma\" }}\n[sweep]\nobjective = \"rr_whole\"\nmin_trades = {min_trades}\n[sweep.grid]\n{grid}\n",
        data("v.csv").to_str().unwrap()
    );
    write(dir, "sweep.toml", &body)
}

#[test]
fn sweep_ranks_every_cell() {
    let dir = tempdir().unwrap();
    let cfg = sweep_config(dir.path(), "\"ma.period\" = { start = 2, end = 4 }", 0);
    let r = qbt(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        dir.path().to_str().unwrap(),
        "sweep",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(
        lines[0],
        "rank,ma.period,buy_count,rr_whole,rr_per_year,mdd,sr,ir,objective"
    );
    assert_eq!(lines.len(), 4);

    let s = parse_csv(&data("v.csv"), ParseOptions::default())
        .unwrap()
        .series;
    let mut expected: Vec<(f64, i64)> = (2..=4)
        .map(|n| {
            let cfg = StrategyConfig::PriceCross { ma: MaSpec::sma(n) };
            (
                backtest::run(&s, &cfg.signals(&s).unwrap())
                    .unwrap()
                    .report
                    .rr_whole,
                n as i64,
            )
        })
        .collect();
    expected.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (line, (rr, n)) in lines[1..].iter().zip(expected) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[1].parse::<i64>().unwrap(), n);
        assert_eq!(f[3].parse::<f64>().unwrap(), rr);
    }
    assert_eq!(
        std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap(),
        r.stdout
    );
}

#[test]
fn one_cell_sweep_equals_backtest() {
    let dir = tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cfg = sweep_config(dir.path(), "\"ma.period\" = [5]", 0);
    let sweep = qbt(&["--config", cfg.to_str().unwrap(), "--out-dir", out, "sweep"]);
    let bt = qbt(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        out,
        "backtest",
        "--set",
        "ma.period=5",
    ]);
    let rep = json(&bt.stdout);
    let row: Vec<&str> = sweep.stdout.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(
        row[2].parse::<u64>().unwrap(),
        rep["buy_count"].as_u64().unwrap()
    );
    for (i, key) in [
        (3, "rr_whole"),
        (4, "rr_per_year"),
        (5, "mdd"),
        (6, "sr"),
        (7, "ir"),
    ] {
        assert_eq!(
            row[i].parse::<f64>().unwrap(),
            rep[key].as_f64().unwrap(),
            "{key}"
        );
    }
}

#[test]
fn sweep_filter_and_thread_independence() {
    let dir = tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cfg = sweep_config(dir.path(), "\"ma.period\" = [2, 3, 4]", 100_000);
    let r = qbt(&["--config", cfg.to_str().unwrap(), "--out-dir", out, "sweep"]);
    assert_eq!(
        (r.code, r.error_json()["kind"].as_str()),
        (3, Some("EmptyGridAfterFilter"))
    );

    let wide = sweep_config(dir.path(), "\"ma.period\" = { start = 2, end = 30 }", 0);
    let args = [
        "--config",
        wide.to_str().unwrap(),
        "--out-dir",
        out,
        "sweep",
        "--objective",
        "sharpe-annual",
    ];
    let one = qbt_env(&args, &[("RAYON_NUM_THREADS", "1")]);
    let many = qbt_env(&args, &[("RAYON_NUM_THREADS", "8")]);
    assert_eq!(one.code, 0, "{}", one.stderr);
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout.lines().count(), 30);
}

#[test]
fn indicator_dump() {
    let dir = tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let closes: Vec<f64> = (0..250)
        .map(|i| 100.0 + 10.0 * (i as f64 / 17.0).sin() + 0.1 * i as f64)
        .collect();
    let f = write(dir.path(), "wave.csv", &closes_csv(&closes));
    let r = qbt(&[
        "--data",
        f.to_str().unwrap(),
        "--out-dir",
        out,
        "indicators",
        "--ind",
        "sma:50",
        "--ind",
        "ema:50",
        "--ind",
        "ama:51:5:12:2",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let dump = std::fs::read_to_string(dir.path().join("indicators.csv")).unwrap();
    let mut rows = csv::Reader::from_reader(dump.as_bytes());
    assert_eq!(
        rows.headers().unwrap().iter().collect::<Vec<_>>(),
        ["index", "close", "sma_50", "ema_50", "ama_51_5_12_2"]
    );
    let table: Vec<Vec<f64>> = rows
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(table.len(), 250);

    // feed the dumped closes back through the kernels
    let close: Vec<f64> = table.iter().map(|r| r[1]).collect();
    assert_eq!(close, closes);
    let specs = [
        MaSpec::sma(50),
        MaSpec::ema(50),
        MaSpec::Ama(AmaParams::new(51, 5, 12, AmaType::Sma).unwrap()),
    ];
    for (k, spec) in specs.iter().enumerate() {
        let col: Vec<f64> = table.iter().map(|r| r[2 + k]).collect();
        assert_eq!(spec.apply(&close).unwrap().into_values(), col);
    }
}

#[test]
fn constant_dump_equals_close() {
    let dir = tempdir().unwrap();
    let f = write(dir.path(), "flat.csv", &closes_csv(&[42.17; 80]));
    let r = qbt(&[
        "--data",
        f.to_str().unwrap(),
        "--out-dir",
        dir.path().to_str().unwrap(),
        "indicators",
        "--ind",
        "sma:10",
        "--ind",
        "ema:7",
        "--ind",
        "ama:20:3:5:1",
        "--ind",
        "ama:20:3:5:2",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let dump = std::fs::read_to_string(dir.path().join("indicators.csv")).unwrap();
    for line in dump.lines().skip(1) {
        assert!(line.split(',').skip(1).all(|x| x == "42.17"), "{line}");
    }
}

#[test]
fn kelly_command() {
    let dir = tempdir().unwrap();
    let r = qbt(&[
        "kelly",
        "--p",
        "0.9",
        "--gain",
        "1.1",
        "--loss",
        "1",
        "--grid-points",
        "11",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r.stdout);
    assert!((v["optimal_fraction"].as_f64().unwrap() - 0.89 / 1.1).abs() < 1e-15);
    // the last grid point stays just below 1 so ln(1 - x) is finite
    assert!((v["grid_argmax"].as_f64().unwrap() - 0.8).abs() < 1e-5);
    let curve = std::fs::read_to_string(dir.path().join("kelly_curve.csv")).unwrap();
    assert_eq!(curve.lines().count(), 12);
    assert!(curve.starts_with("x,expected_log_return\n0,0\n"));
}

#[test]
fn benchmark_file_must_line_up() {
    let dir = tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let f = write(dir.path(), "short.csv", &closes_csv(&[1.0, 2.0, 3.0]));
    let r = qbt(&[
        "--data",
        data("v.csv").to_str().unwrap(),
        "--out-dir",
        out,
        "backtest",
        "--set",
        "kind=buy_and_hold",
        "--benchmark",
        f.to_str().unwrap(),
    ]);
    assert_eq!(
        (r.code, r.error_json()["kind"].as_str()),
        (2, Some("BenchmarkMismatch"))
    );
    let r = qbt(&[
        "--data",
        data("v.csv").to_str().unwrap(),
        "--out-dir",
        out,
        "backtest",
        "--set",
        "kind=buy_and_hold",
        "--benchmark",
        data("v.csv").to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}
