#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn error_json(&self) -> serde_json::Value {
        serde_json::from_str(self.stderr.trim())
            .unwrap_or_else(|e| panic!("stderr is not JSON ({e}): {}", self.stderr))
    }
}

pub fn qbt<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Run {
    qbt_env(args, &[])
}

pub fn qbt_env<S: AsRef<std::ffi::OsStr>>(args: &[S], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_quantbt"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Minimal OHLCV CSV from closes (flat bars, consecutive days).
pub fn closes_csv(closes: &[f64]) -> String {
    let d0 = chrono::NaiveDate::from_ymd_opt(2016, 1, 1).unwrap();
    let mut s = String::from("date,open,high,low,close,adj_close,volume\n");
    for (c, d) in closes.iter().zip(d0.iter_days()) {
        s.push_str(&format!("{d},{c},{c},{c},{c},{c},10\n"));
    }
    s
}

pub fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}
