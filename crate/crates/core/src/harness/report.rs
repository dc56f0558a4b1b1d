use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SweepResult;
use crate::error::{Error, Result};
use crate::metrics::EvalReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::InvalidArgument(format!("unknown format `{s}`"))),
        }
    }
}

/// One row of `cells.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRow {
    pub method_tag: String,
    pub k: usize,
    pub auc: f64,
    pub acc_n: f64,
    pub acc_2n: f64,
}

impl From<&EvalReport> for CellRow {
    fn from(r: &EvalReport) -> Self {
        Self {
            method_tag: r.method_tag.clone(),
            k: r.k,
            auc: r.auc,
            acc_n: r.acc_n,
            acc_2n: r.acc_2n,
        }
    }
}

#[derive(Debug, Serialize)]
struct SummaryRow {
    method_tag: String,
    mean_auc: f64,
    mean_acc_n: f64,
    mean_acc_2n: f64,
}

#[derive(Debug, Serialize)]
struct ErrorRow {
    method_tag: String,
    k: usize,
    error: String,
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn num(v: f64) -> String {
    format!("{v:?}")
}

/// Writes the per-cell table, the per-method summary and one AUC-vs-K
/// curve per method under `out_dir`:
///
/// * `cells.csv` — `method_tag,k,auc,acc_n,acc_2n`
/// * `summary.csv` — `method_tag,mean_auc,mean_acc_n,mean_acc_2n`
/// * `curves/<method_tag>.csv` — `k,auc`
/// * `errors.csv` — only when some cell failed
///
/// JSON output mirrors the tables as `cells.json`, `summary.json` and
/// `errors.json`. Numbers are written at full precision. Returns the paths
/// written, in order.
pub fn emit_reports(
    result: &SweepResult,
    out_dir: impl AsRef<Path>,
    formats: &[OutputFormat],
) -> Result<Vec<PathBuf>> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let cells: Vec<CellRow> = result.reports().map(CellRow::from).collect();
    let summary: Vec<SummaryRow> = result
        .summaries
        .iter()
        .map(|s| SummaryRow {
            method_tag: s.method_tag.to_string(),
            mean_auc: s.mean_auc,
            mean_acc_n: s.mean_acc_n,
            mean_acc_2n: s.mean_acc_2n,
        })
        .collect();
    let errors: Vec<ErrorRow> = result
        .cells
        .iter()
        .filter_map(|c| {
            c.outcome.as_ref().err().map(|e| ErrorRow {
                method_tag: c.method_tag.to_string(),
                k: c.k,
                error: e.clone(),
            })
        })
        .collect();

    let mut written = Vec::new();
    let mut emit = |name: PathBuf, body: String| -> Result<()> {
        write_file(&name, &body)?;
        written.push(name);
        Ok(())
    };

    if formats.contains(&OutputFormat::Csv) {
        let mut body = format!("{}\n", EvalReport::CSV_HEADER);
        for c in &cells {
            let _ = writeln!(
                body,
                "{},{},{},{},{}",
                c.method_tag,
                c.k,
                num(c.auc),
                num(c.acc_n),
                num(c.acc_2n)
            );
        }
        emit(out_dir.join("cells.csv"), body)?;

        let mut body = String::from("method_tag,mean_auc,mean_acc_n,mean_acc_2n\n");
        for s in &summary {
            let _ = writeln!(
                body,
                "{},{},{},{}",
                s.method_tag,
                num(s.mean_auc),
                num(s.mean_acc_n),
                num(s.mean_acc_2n)
            );
        }
        emit(out_dir.join("summary.csv"), body)?;

        let curves = out_dir.join("curves");
        fs::create_dir_all(&curves).map_err(|source| Error::Io {
            path: curves.clone(),
            source,
        })?;
        for s in &result.summaries {
            let tag = s.method_tag.to_string();
            let mut body = String::from("k,auc\n");
            for c in cells.iter().filter(|c| c.method_tag == tag) {
                let _ = writeln!(body, "{},{}", c.k, num(c.auc));
            }
            emit(curves.join(format!("{tag}.csv")), body)?;
        }

        if !errors.is_empty() {
            let mut w = csv::Writer::from_writer(Vec::new());
            for e in &errors {
                w.serialize(e).map_err(|source| Error::Csv {
                    path: out_dir.join("errors.csv"),
                    source,
                })?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            emit(
                out_dir.join("errors.csv"),
                String::from_utf8_lossy(&bytes).into_owned(),
            )?;
        }
    }

    if formats.contains(&OutputFormat::Json) {
        emit(
            out_dir.join("cells.json"),
            serde_json::to_string_pretty(&cells)? + "\n",
        )?;
        emit(
            out_dir.join("summary.json"),
            serde_json::to_string_pretty(&summary)? + "\n",
        )?;
        if !errors.is_empty() {
            emit(
                out_dir.join("errors.json"),
                serde_json::to_string_pretty(&errors)? + "\n",
            )?;
        }
    }
    Ok(written)
}

/// Reads a `cells.csv` written by [`emit_reports`].
pub fn load_cells_csv(path: impl AsRef<Path>) -> Result<Vec<CellRow>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    reader
        .deserialize()
        .map(|row| {
            row.map_err(|source| Error::Csv {
                path: path.to_path_buf(),
                source,
            })
        })
        .collect()
}

/// Fixed-width summary, one row per method, six decimals.
pub fn format_summary_table(result: &SweepResult) -> String {
    let width = result
        .summaries
        .iter()
        .map(|s| s.method_tag.to_string().len())
        .max()
        .unwrap_or(6)
        .max("method".len());
    let mut out = format!(
        "{:<width$}  {:>10}  {:>10}  {:>10}  {:>5}\n",
        "method", "mean_auc", "mean_acc_n", "mean_acc_2n", "cells"
    );
    for s in &result.summaries {
        let _ = writeln!(
            out,
            "{:<width$}  {:>10.6}  {:>10.6}  {:>10.6}  {:>5}",
            s.method_tag.to_string(),
            s.mean_auc,
            s.mean_acc_n,
            s.mean_acc_2n,
            s.cells
        );
    }
    out
}
