//! CSV emission. Floats use Rust's shortest round-trip formatting; failed
//! cells are the literal `FAIL`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use taupade::Cell;

use crate::pipeline::{RunReport, StageResult};

pub const FAIL: &str = "FAIL";

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else {
        FAIL.to_string()
    }
}

fn cell(x: &StageResult<f64>) -> String {
    match x {
        Ok(v) => num(*v),
        Err(_) => FAIL.to_string(),
    }
}

type Table = (Vec<&'static str>, Vec<Vec<String>>);

fn write_csv(path: &Path, (header, rows): &Table) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()
}

pub fn tau_coeffs_table(report: &RunReport) -> Option<Table> {
    let coeffs = report.tau.as_ref().ok()?;
    let rows = coeffs
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| vec![k.to_string(), num(*c)])
        .collect();
    Some((vec!["k", "coeff"], rows))
}

/// Error columns appear only when an oracle is attached.
pub fn error_table(report: &RunReport) -> Table {
    let with_oracle = report.error_table.iter().any(|r| r.error_norm.is_some());
    let mut header = vec!["n", "condition_estimate"];
    if with_oracle {
        header.extend(["error_norm", "ratio"]);
    }
    let rows = report
        .error_table
        .iter()
        .map(|r| {
            let mut row = vec![r.n.to_string(), cell(&r.condition_estimate)];
            if with_oracle {
                for v in [&r.error_norm, &r.ratio] {
                    row.push(v.as_ref().map_or(FAIL.to_string(), cell));
                }
            }
            row
        })
        .collect();
    (header, rows)
}

pub fn froissart_table(report: &RunReport) -> Option<Table> {
    let table = report.froissart.as_ref()?;
    let rows = table
        .iter()
        .map(|((p, q), c)| {
            let count = match c {
                Cell::Count(n) => n.to_string(),
                Cell::Failed(_) => FAIL.to_string(),
            };
            vec![p.to_string(), q.to_string(), count]
        })
        .collect();
    Some((vec!["p", "q", "count"], rows))
}

pub fn poles_table(report: &RunReport) -> Option<Table> {
    if report.poles.is_empty() {
        return None;
    }
    let mut rows = Vec::new();
    for r in &report.poles {
        match &r.poles {
            Ok(poles) => {
                for z in poles {
                    rows.push(vec![r.p.to_string(), r.q.to_string(), num(z.re), num(z.im)]);
                }
            }
            Err(_) => rows.push(vec![r.p.to_string(), r.q.to_string(), FAIL.into(), FAIL.into()]),
        }
    }
    Some((vec!["p", "q", "re", "im"], rows))
}

/// Long format: one row per coefficient, `part` is `a` (numerator) or `b`
/// (denominator).
pub fn filter_coeffs_table(report: &RunReport) -> Option<Table> {
    let r = report.filter.as_ref()?.as_ref().ok()?;
    let mut rows = Vec::new();
    for (part, series) in [("a", &r.numerator), ("b", &r.denominator)] {
        for (i, v) in series.coeffs().iter().enumerate() {
            rows.push(vec![r.p.to_string(), r.q.to_string(), part.to_string(), i.to_string(), num(*v)]);
        }
    }
    Some((vec!["p", "q", "part", "i", "value"], rows))
}

pub fn errors_table(report: &RunReport) -> Option<Table> {
    if report.grid.is_empty() {
        return None;
    }
    let with_filter = report.grid.iter().any(|g| g.filter_error.is_some());
    let mut header = vec!["t", "exact", "tau_error"];
    if with_filter {
        header.push("filter_error");
    }
    let rows = report
        .grid
        .iter()
        .map(|g| {
            let mut row = vec![num(g.t), num(g.exact), cell(&g.tau_error)];
            if with_filter {
                row.push(g.filter_error.as_ref().map_or(FAIL.to_string(), cell));
            }
            row
        })
        .collect();
    Some((header, rows))
}

/// Writes every available table into `dir` and returns the paths written.
pub fn write_report(report: &RunReport, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let tables = [
        ("report.csv", Some(error_table(report))),
        ("tau_coeffs.csv", tau_coeffs_table(report)),
        ("froissart.csv", froissart_table(report)),
        ("filter_coeffs.csv", filter_coeffs_table(report)),
        ("poles.csv", poles_table(report)),
        ("errors.csv", errors_table(report)),
    ];
    let mut written = Vec::new();
    for (name, table) in tables {
        if let Some(t) = table {
            let path = dir.join(name);
            write_csv(&path, &t)?;
            written.push(path);
        }
    }
    Ok(written)
}
