use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsvOptions {
    pub delimiter: u8,
    /// First line holds column names. Written by [`save_csv`], skipped or
    /// used for label lookup by [`load_csv`].
    pub has_header: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: false,
        }
    }
}

/// Which column of a CSV file holds the 0/1 outlier label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    /// Header name; needs `has_header`.
    Name(String),
    /// Zero-based column index.
    Index(usize),
    Last,
}

impl LabelColumn {
    /// `last`, a zero-based integer index, or a header name.
    pub fn parse(token: &str) -> Self {
        if token.eq_ignore_ascii_case("last") {
            Self::Last
        } else if let Ok(i) = token.parse::<usize>() {
            Self::Index(i)
        } else {
            Self::Name(token.to_string())
        }
    }
}

/// Reads one point per row. Line and column numbers in errors are 1-based.
pub fn load_csv(
    path: impl AsRef<Path>,
    label: Option<&LabelColumn>,
    options: CsvOptions,
) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(options.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };

    let header: Option<Vec<String>> = if options.has_header {
        Some(
            reader
                .headers()
                .map_err(csv_err)?
                .iter()
                .map(str::to_string)
                .collect(),
        )
    } else {
        None
    };

    let mut width: Option<usize> = header.as_ref().map(Vec::len);
    let mut label_idx: Option<usize> = None;
    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut n = 0usize;

    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(n + 1, |p| p.line() as usize);
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        let w = *width.get_or_insert(record.len());
        if record.len() != w {
            return Err(parse_error(
                path,
                line,
                record.len().min(w) + 1,
                format!("expected {w} fields, found {}", record.len()),
            ));
        }
        if label_idx.is_none() {
            if let Some(label) = label {
                label_idx = Some(resolve_label(path, label, header.as_deref(), w)?);
            }
        }
        for (col, cell) in record.iter().enumerate() {
            if Some(col) == label_idx {
                labels.push(parse_label(cell).ok_or_else(|| {
                    parse_error(path, line, col + 1, format!("label `{cell}` is not 0 or 1"))
                })?);
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| {
                parse_error(path, line, col + 1, format!("`{cell}` is not a number"))
            })?;
            if !v.is_finite() {
                return Err(parse_error(
                    path,
                    line,
                    col + 1,
                    format!("`{cell}` is not finite"),
                ));
            }
            points.push(v);
        }
        n += 1;
    }

    let width = width.unwrap_or(0);
    let dim = width - usize::from(label_idx.is_some());
    let labels = label_idx.map(|_| labels);
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(Dataset::from_flat(n, dim, points, labels)?.with_name(name))
}

/// Writes coordinates at full round-trip precision; labels, when present,
/// go in the last column.
pub fn save_csv(dataset: &Dataset, path: impl AsRef<Path>, options: CsvOptions) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    let sep = options.delimiter as char;
    let mut line = String::new();

    if options.has_header {
        let mut cols: Vec<String> = (0..dataset.dim()).map(|j| format!("x{j}")).collect();
        if dataset.labels().is_some() {
            cols.push("label".into());
        }
        writeln!(out, "{}", cols.join(&sep.to_string())).map_err(io_err)?;
    }
    for (i, row) in dataset.rows().enumerate() {
        line.clear();
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                line.push(sep);
            }
            // Debug formatting is the shortest representation that parses back exactly.
            line.push_str(&format!("{v:?}"));
        }
        if let Some(labels) = dataset.labels() {
            line.push(sep);
            line.push_str(if labels[i] == 1 { "1" } else { "0" });
        }
        writeln!(out, "{line}").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

fn resolve_label(
    path: &Path,
    label: &LabelColumn,
    header: Option<&[String]>,
    width: usize,
) -> Result<usize> {
    let missing = |what: String| Error::InvalidArgument(format!("{}: {what}", path.display()));
    let idx = match label {
        LabelColumn::Last => width.checked_sub(1),
        LabelColumn::Index(i) => Some(*i),
        LabelColumn::Name(name) => {
            let header = header.ok_or_else(|| {
                missing(format!(
                    "label column `{name}` named, but the file has no header"
                ))
            })?;
            Some(
                header
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| missing(format!("no column named `{name}`")))?,
            )
        }
    };
    match idx {
        Some(i) if i < width && width >= 2 => Ok(i),
        _ => Err(missing(format!(
            "label column {label:?} not present in {width} columns"
        ))),
    }
}

fn parse_label(cell: &str) -> Option<u8> {
    match cell {
        "0" => Some(0),
        "1" => Some(1),
        other => match other.parse::<f64>().ok()? {
            0.0 => Some(0),
            1.0 => Some(1),
            _ => None,
        },
    }
}

fn parse_error(path: &Path, row: usize, column: usize, message: String) -> Error {
    Error::Parse {
        path: PathBuf::from(path),
        row,
        column,
        message,
    }
}
