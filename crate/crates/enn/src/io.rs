//! Dataset CSV, label-metric JSON and query files.
//!
//! Datasets are CSV with a header naming the feature columns and one column
//! called `label`. Label metrics are JSON objects
//! `{"labels": [...], "matrix": [[...]]}` where `matrix[i][j]` is the
//! distance `Y(labels[i], labels[j])` and the string `"inf"` stands for an
//! infinite distance. The matrix may be asymmetric.

use std::collections::BTreeSet;
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use enn_core::{Cost, CostValue, FiniteVCat};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Open {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: line {line}: {message}")]
    Csv {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{path}: line {line}, column {column}: {message}")]
    Json {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
}

impl IoError {
    fn invalid(path: &Path, message: impl Into<String>) -> Self {
        IoError::Invalid {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }
}

/// A dataset as read from disk, before a label space is chosen.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    pub feature_names: Vec<String>,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<String>,
}

impl RawDataset {
    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Distinct labels in sorted order, the discrete label space used when
    /// no label metric is supplied.
    pub fn distinct_labels(&self) -> Vec<String> {
        self.labels
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Labels read as real numbers, for value fields over the real line.
    pub fn numeric_labels(&self, path: &Path) -> Result<Vec<f64>, IoError> {
        self.labels
            .iter()
            .enumerate()
            .map(|(row, l)| {
                parse_real(l).ok_or_else(|| {
                    IoError::invalid(
                        path,
                        format!("row {}: label {l:?} is not a real number", row + 1),
                    )
                })
            })
            .collect()
    }

    /// Label indices into `names`; every label must be present.
    pub fn label_indices(&self, names: &[String], path: &Path) -> Result<Vec<usize>, IoError> {
        self.labels
            .iter()
            .map(|l| {
                names.iter().position(|n| n == l).ok_or_else(|| {
                    IoError::invalid(path, format!("label {l:?} is not in the label space"))
                })
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = self.feature_names.clone();
        header.push("label".into());
        w.write_record(&header)?;
        for (row, label) in self.features.iter().zip(&self.labels) {
            let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            rec.push(label.clone());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn parse_real(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn read_dataset(path: &Path) -> Result<RawDataset, IoError> {
    let file = File::open(path).map_err(|source| IoError::Open {
        path: path.to_path_buf(),
        source,
    })?;
    parse_dataset(file, path)
}

pub fn parse_dataset<R: Read>(input: R, path: &Path) -> Result<RawDataset, IoError> {
    let csv_err = |e: csv::Error| IoError::Csv {
        path: path.to_path_buf(),
        line: e.position().map_or(1, |p| p.line()),
        message: e.to_string(),
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = reader.headers().map_err(csv_err)?.clone();
    let label_col = header
        .iter()
        .position(|h| h == "label")
        .ok_or_else(|| IoError::invalid(path, "header has no `label` column"))?;
    let feature_cols: Vec<usize> = (0..header.len()).filter(|&c| c != label_col).collect();
    if feature_cols.is_empty() {
        return Err(IoError::invalid(path, "header has no feature columns"));
    }
    let mut data = RawDataset {
        feature_names: feature_cols
            .iter()
            .map(|&c| header[c].to_string())
            .collect(),
        features: Vec::new(),
        labels: Vec::new(),
    };
    for rec in reader.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        let mut row = Vec::with_capacity(feature_cols.len());
        for &c in &feature_cols {
            let v = parse_real(&rec[c]).ok_or_else(|| IoError::Csv {
                path: path.to_path_buf(),
                line,
                message: format!(
                    "column `{}`: {:?} is not a finite number",
                    &header[c], &rec[c]
                ),
            })?;
            row.push(v);
        }
        data.features.push(row);
        data.labels.push(rec[label_col].to_string());
    }
    if data.is_empty() {
        return Err(IoError::invalid(path, "dataset has no rows"));
    }
    Ok(data)
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
enum Entry {
    Number(f64),
    Text(InfLiteral),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
enum InfLiteral {
    #[serde(rename = "inf")]
    Inf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricFile {
    labels: Vec<String>,
    matrix: Vec<Vec<Entry>>,
}

/// A label metric exactly as written in its file.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMetric {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<CostValue>>,
}

impl LabelMetric {
    /// Builds the enriched category without checking its laws, so that
    /// `validate` can report violations instead of refusing the file.
    pub fn category(&self) -> FiniteVCat<Cost> {
        FiniteVCat::new(self.labels.clone(), self.matrix.clone()).expect("shape checked on load")
    }
}

impl fmt::Display for LabelMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, row) in self.labels.iter().zip(&self.matrix) {
            write!(f, "{name}:")?;
            for v in row {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn read_label_metric(path: &Path) -> Result<LabelMetric, IoError> {
    let file = File::open(path).map_err(|source| IoError::Open {
        path: path.to_path_buf(),
        source,
    })?;
    parse_label_metric(file, path)
}

pub fn parse_label_metric<R: Read>(input: R, path: &Path) -> Result<LabelMetric, IoError> {
    let raw: MetricFile = serde_json::from_reader(input).map_err(|e| IoError::Json {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let n = raw.labels.len();
    if n == 0 {
        return Err(IoError::invalid(path, "no labels"));
    }
    if raw.matrix.len() != n {
        return Err(IoError::invalid(
            path,
            format!("matrix has {} rows for {n} labels", raw.matrix.len()),
        ));
    }
    // FiniteVCat::new rejects duplicate names; check here for a better message
    if raw.labels.iter().collect::<BTreeSet<_>>().len() != n {
        return Err(IoError::invalid(path, "duplicate label names"));
    }
    let mut matrix = Vec::with_capacity(n);
    for (i, row) in raw.matrix.iter().enumerate() {
        if row.len() != n {
            return Err(IoError::invalid(
                path,
                format!("matrix row {i} has {} entries, expected {n}", row.len()),
            ));
        }
        let row = row
            .iter()
            .enumerate()
            .map(|(j, e)| match *e {
                Entry::Text(InfLiteral::Inf) => Ok(CostValue::INFINITY),
                Entry::Number(v) => CostValue::new(v)
                    .map_err(|err| IoError::invalid(path, format!("matrix[{i}][{j}]: {err}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        matrix.push(row);
    }
    Ok(LabelMetric {
        labels: raw.labels,
        matrix,
    })
}

/// Serializes a label metric in the same format, `inf` as a string.
pub fn label_metric_json(metric: &LabelMetric) -> String {
    let matrix: Vec<Vec<serde_json::Value>> = metric
        .matrix
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    if v.is_infinite() {
                        "inf".into()
                    } else {
                        v.get().into()
                    }
                })
                .collect()
        })
        .collect();
    serde_json::json!({ "labels": metric.labels, "matrix": matrix }).to_string()
}

/// Parses `a,b,c` into a point.
pub fn parse_point(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|c| parse_real(c).ok_or_else(|| format!("{c:?} is not a finite number")))
        .collect()
}

/// Query points from a CSV file with a header. A `label` column, if
/// present, is ignored so that datasets can be classified directly.
pub fn read_queries(path: &Path) -> Result<Vec<Vec<f64>>, IoError> {
    let file = File::open(path).map_err(|source| IoError::Open {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let header = reader
        .headers()
        .map_err(|e| IoError::Csv {
            path: path.to_path_buf(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let cols: Vec<usize> = (0..header.len())
        .filter(|&c| &header[c] != "label")
        .collect();
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| IoError::Csv {
            path: path.to_path_buf(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let row = cols
            .iter()
            .map(|&c| {
                parse_real(&rec[c]).ok_or_else(|| IoError::Csv {
                    path: path.to_path_buf(),
                    line,
                    message: format!("{:?} is not a finite number", &rec[c]),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(row);
    }
    Ok(out)
}

/// Reduces a [`Cost`] value to text, `inf` for the infinite distance.
pub fn cost_text(v: CostValue) -> String {
    v.to_string()
}

/// Inverse of [`cost_text`].
pub fn parse_cost(s: &str) -> Option<CostValue> {
    match s.trim() {
        "inf" => Some(CostValue::INFINITY),
        t => t.parse::<f64>().ok().and_then(|v| CostValue::new(v).ok()),
    }
}
