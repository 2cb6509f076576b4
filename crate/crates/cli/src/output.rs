use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use pseudoboson::CheckReport;
use serde::Serialize;

use crate::config::ReportFormat;
use crate::suite::Cell;

#[derive(Serialize)]
struct ResidualCsvRow<'a> {
    model: &'a str,
    family: &'a str,
    index: String,
    residual: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct TraceCsvRow<'a> {
    model: &'a str,
    family: &'a str,
    index: String,
    value: f64,
}

/// Serialized report payload: one line per check, in suite order.
pub fn jsonl(cells: &[Cell]) -> Result<String> {
    let mut out = String::new();
    for c in cells {
        out.push_str(&serde_json::to_string(&c.report)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_jsonl(text: &str) -> Result<Vec<CheckReport>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("record {}", i + 1)))
        .collect()
}

pub fn summary(cells: &[Cell]) -> String {
    let width = cells.iter().map(|c| c.label.len()).max().unwrap_or(5).max(5);
    let mut s = String::new();
    let _ = writeln!(s, "{:<18} {:<width$} {:>12} {:>10}  status", "check", "model", "max_residual", "tolerance");
    let (mut pass, mut fail, mut diag) = (0, 0, 0);
    for c in cells {
        let r = &c.report;
        let status = if r.diagnostic {
            diag += 1;
            "diag"
        } else if r.pass {
            pass += 1;
            "pass"
        } else {
            fail += 1;
            "FAIL"
        };
        let tol = if r.diagnostic { "-".to_string() } else { format!("{:.1e}", r.tolerance) };
        let _ = writeln!(s, "{:<18} {:<width$} {:>12.3e} {:>10}  {status}", r.check, c.label, r.max_residual, tol);
    }
    let _ = writeln!(s, "\n{pass} passed, {fail} failed, {diag} diagnostic");
    s
}

/// Write the report file, per-check CSV tables and the summary into `dir`.
pub fn write_all(dir: &Path, cells: &[Cell], format: ReportFormat, csv: bool) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    match format {
        ReportFormat::Jsonl => std::fs::write(dir.join("report.jsonl"), jsonl(cells)?)?,
        ReportFormat::Json => {
            let reports: Vec<&CheckReport> = cells.iter().map(|c| &c.report).collect();
            let mut text = serde_json::to_string_pretty(&reports)?;
            text.push('\n');
            std::fs::write(dir.join("report.json"), text)?;
        }
    }
    if csv {
        let mut by_check: BTreeMap<&str, Vec<&Cell>> = BTreeMap::new();
        for c in cells {
            by_check.entry(c.report.check.as_str()).or_default().push(c);
        }
        for (check, group) in by_check {
            let mut w = csv::Writer::from_path(dir.join(format!("{check}.csv")))?;
            for c in &group {
                for r in &c.report.rows {
                    w.serialize(ResidualCsvRow {
                        model: &c.label,
                        family: &r.family,
                        index: r.index.label(),
                        residual: r.residual,
                        tolerance: r.tolerance,
                        pass: r.passes(),
                    })?;
                }
            }
            w.flush()?;
            if group.iter().any(|c| !c.report.trace.is_empty()) {
                let mut w = csv::Writer::from_path(dir.join(format!("{check}_trace.csv")))?;
                for c in &group {
                    for t in &c.report.trace {
                        w.serialize(TraceCsvRow {
                            model: &c.label,
                            family: &t.family,
                            index: t.index.label(),
                            value: t.value,
                        })?;
                    }
                }
                w.flush()?;
            }
        }
    }
    let mut f = std::fs::File::create(dir.join("summary.txt"))?;
    f.write_all(summary(cells).as_bytes())?;
    Ok(())
}
