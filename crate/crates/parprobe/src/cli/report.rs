//! Experiment reports: CSV emission with 17 significant digits, a small
//! hand-rolled JSON writer, FNV-1a content hashing, and the pass/fail
//! ledger.

use crate::Result;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// One acceptance-style entry: what was checked, against which bound.
#[derive(Clone, Debug)]
pub struct LedgerEntry {
    pub invariant: String,
    pub observed: f64,
    pub bound: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Default)]
pub struct ExperimentReport {
    pub id: String,
    pub pipeline: String,
    pub seed: u64,
    pub config_echo: Vec<(String, String)>,
    pub csv_files: Vec<(PathBuf, u64)>,
    pub fitted: Vec<(String, f64)>,
    pub ledger: Vec<LedgerEntry>,
    pub wall_seconds: f64,
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        self.ledger.iter().all(|e| e.pass)
    }

    pub fn record_fit(&mut self, name: &str, value: f64) {
        self.fitted.push((name.to_string(), value));
    }

    pub fn check(&mut self, invariant: &str, observed: f64, bound: &str, pass: bool) {
        self.ledger.push(LedgerEntry {
            invariant: invariant.to_string(),
            observed,
            bound: bound.to_string(),
            pass,
        });
    }

    /// Write the JSON report into the output directory.
    pub fn write(&self, out_dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(out_dir)?;
        let path = out_dir.join(format!("{}_report.json", self.id));
        let mut s = String::new();
        s.push_str("{\n");
        let _ = writeln!(s, "  \"experiment\": {},", json_str(&self.id));
        let _ = writeln!(s, "  \"pipeline\": {},", json_str(&self.pipeline));
        let _ = writeln!(s, "  \"seed\": {},", self.seed);
        let _ = writeln!(s, "  \"wall_seconds\": {},", fmt_float(self.wall_seconds));
        s.push_str("  \"config\": {\n");
        for (i, (k, v)) in self.config_echo.iter().enumerate() {
            let comma = if i + 1 < self.config_echo.len() { "," } else { "" };
            let _ = writeln!(s, "    {}: {}{comma}", json_str(k), json_str(v));
        }
        s.push_str("  },\n  \"csv\": [\n");
        for (i, (p, h)) in self.csv_files.iter().enumerate() {
            let comma = if i + 1 < self.csv_files.len() { "," } else { "" };
            let _ = writeln!(
                s,
                "    {{\"file\": {}, \"fnv1a\": \"{h:016x}\"}}{comma}",
                json_str(&p.display().to_string())
            );
        }
        s.push_str("  ],\n  \"fitted\": {\n");
        for (i, (k, v)) in self.fitted.iter().enumerate() {
            let comma = if i + 1 < self.fitted.len() { "," } else { "" };
            let _ = writeln!(s, "    {}: {}{comma}", json_str(k), fmt_float(*v));
        }
        s.push_str("  },\n  \"ledger\": [\n");
        for (i, e) in self.ledger.iter().enumerate() {
            let comma = if i + 1 < self.ledger.len() { "," } else { "" };
            let _ = writeln!(
                s,
                "    {{\"invariant\": {}, \"observed\": {}, \"bound\": {}, \"pass\": {}}}{comma}",
                json_str(&e.invariant),
                fmt_float(e.observed),
                json_str(&e.bound),
                e.pass
            );
        }
        let _ = writeln!(s, "  ],\n  \"all_pass\": {}\n}}", self.all_pass());
        std::fs::write(&path, s)?;
        Ok(path)
    }
}

/// 17 significant digits, reproducible across runs.
pub fn fmt_float(v: f64) -> String {
    if v == 0.0 {
        return "0.0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() { "\"nan\"".into() } else { format!("\"{v}\"") };
    }
    format!("{v:.16e}")
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Write a CSV with a header row; every numeric cell carries 17 significant
/// digits so reruns are byte-comparable.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<u64> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut s = String::new();
    s.push_str(&header.join(","));
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    std::fs::write(path, &s)?;
    Ok(fnv1a(s.as_bytes()))
}

/// FNV-1a 64-bit content hash.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x1000_0000_01b3);
    }
    hash
}

pub fn hash_file(path: &Path) -> Result<u64> {
    Ok(fnv1a(&std::fs::read(path)?))
}
