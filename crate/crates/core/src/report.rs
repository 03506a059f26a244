//! Flat-file output: one JSON document per run and CSV tables.
//!
//! CSV files use a header row, comma delimiters and `.` decimals; every number
//! is written with 17 significant digits so it parses back to the same `f64`.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::experiments::{RunReport, SnapshotFields, SweepEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    Both,
}

impl OutputFormat {
    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "both" => Ok(OutputFormat::Both),
            other => Err(format!("unknown format '{other}', expected json, csv or both")),
        }
    }
}

/// A number with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Build a CSV document from a header and numeric rows. `None` cells stay empty.
pub fn csv_table<'a, I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = &'a [Option<f64>]>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| c.map(fmt_num).unwrap_or_default()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// `xi,theta_numeric,theta_analytic`.
pub fn snapshot_csv(fields: &SnapshotFields) -> String {
    let mut out = String::from("xi,theta_numeric,theta_analytic\n");
    for (i, xi) in fields.numeric.grid.positions().enumerate() {
        let _ =
            writeln!(out, "{},{},{}", fmt_num(xi), fmt_num(fields.numeric.theta[i]), fmt_num(fields.analytic.theta[i]));
    }
    out
}

pub fn report_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Snapshot file stem, e.g. `fig1_left_tau27`.
pub fn snapshot_stem(name: &str, tau: f64) -> String {
    format!("{name}_tau{tau}")
}

/// Write the report and/or snapshot tables under `dir`; returns the files written.
pub fn write_report(dir: &Path, report: &RunReport, format: OutputFormat) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let name = &report.config.name;
    let mut written = Vec::new();
    if format.json() {
        let path = dir.join(format!("{name}.json"));
        fs::write(&path, report_json(report))?;
        written.push(path);
    }
    if format.csv() {
        for fields in &report.fields {
            let path = dir.join(format!("{}.csv", snapshot_stem(name, fields.numeric.tau)));
            fs::write(&path, snapshot_csv(fields))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// One row per sweep entry, sorted by `n`.
pub fn sweep_summary_csv(entries: &[SweepEntry]) -> String {
    let mut sorted: Vec<&SweepEntry> = entries.iter().collect();
    sorted.sort_by(|a, b| a.n.total_cmp(&b.n));
    let mut out = String::from("n,late_time_l2,flux_exponent,corner_exponent,status\n");
    for e in sorted {
        let cell = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
        match &e.report {
            Ok(r) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},ok",
                    fmt_num(e.n),
                    cell(r.late_time_l2()),
                    cell(r.flux_fit.map(|f| f.exponent)),
                    cell(r.corner_fit.map(|f| f.exponent)),
                );
            }
            Err(err) => {
                let msg = err.to_string().replace([',', '\n'], ";");
                let _ = writeln!(out, "{},,,,error: {msg}", fmt_num(e.n));
            }
        }
    }
    out
}
