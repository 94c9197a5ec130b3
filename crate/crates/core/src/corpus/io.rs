//! Dataset readers (CSV canonical, JSONL behind the same schema) and the
//! split writer.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

use super::{Corpus, Statement};

/// Names of the text and label columns in a dataset file.
#[derive(Debug, Clone)]
pub struct ColumnSchema {
    pub text: String,
    pub label: String,
}

impl Default for ColumnSchema {
    fn default() -> Self {
        Self {
            text: "text".to_string(),
            label: "label".to_string(),
        }
    }
}

/// A rejected input row plus the reason it was rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct RowDiagnostic {
    /// 1-based data row number (header excluded).
    pub row: usize,
    pub message: String,
}

impl std::fmt::Display for RowDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "row {}: {}", self.row, self.message)
    }
}

/// Result of loading a dataset: the accepted statements plus per-row
/// diagnostics for rejected rows.
#[derive(Debug, Clone)]
pub struct LoadOutcome {
    pub corpus: Corpus,
    pub rejected: Vec<RowDiagnostic>,
}

fn parse_label(raw: &str) -> Option<u8> {
    match raw.trim() {
        "0" => Some(0),
        "1" => Some(1),
        _ => None,
    }
}

/// Loads a labeled dataset. `.jsonl` files are read as JSON lines; every
/// other extension is treated as CSV (UTF-8, RFC-4180 quoting, header row).
///
/// Rows whose label is outside {0, 1} are rejected with a diagnostic naming
/// the row; loading continues. An input with no accepted rows is an error.
pub fn load_dataset(path: &Path, schema: &ColumnSchema) -> Result<LoadOutcome> {
    let outcome = match path.extension().and_then(|e| e.to_str()) {
        Some("jsonl") => load_jsonl(path, schema)?,
        _ => load_csv(path, schema)?,
    };
    if outcome.corpus.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(outcome)
}

fn load_csv(path: &Path, schema: &ColumnSchema) -> Result<LoadOutcome> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => io_err(path, &e),
            _ => Error::Csv {
                path: path.to_path_buf(),
                source: e,
            },
        })?;

    let headers = reader
        .headers()
        .map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let text_col = col(&schema.text).ok_or_else(|| Error::MissingColumn {
        path: path.to_path_buf(),
        name: schema.text.clone(),
    })?;
    let label_col = col(&schema.label).ok_or_else(|| Error::MissingColumn {
        path: path.to_path_buf(),
        name: schema.label.clone(),
    })?;
    let source_col = col("source");

    let mut statements = Vec::new();
    let mut rejected = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let text = record.get(text_col).unwrap_or("");
        let raw_label = record.get(label_col).unwrap_or("");
        match parse_label(raw_label) {
            Some(label) => {
                let mut s = Statement::new(text, label);
                s.source_tag = source_col
                    .and_then(|c| record.get(c))
                    .filter(|v| !v.is_empty())
                    .map(str::to_string);
                statements.push(s);
            }
            None => rejected.push(RowDiagnostic {
                row,
                message: format!("label {raw_label:?} outside {{0, 1}}; row rejected"),
            }),
        }
    }
    Ok(LoadOutcome {
        corpus: Corpus::new(statements),
        rejected,
    })
}

fn load_jsonl(path: &Path, schema: &ColumnSchema) -> Result<LoadOutcome> {
    #[derive(Deserialize)]
    struct Flexible(serde_json::Map<String, serde_json::Value>);

    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut statements = Vec::new();
    let mut rejected = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let row = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let obj: Flexible = serde_json::from_str(line).map_err(|e| Error::Config(format!(
            "{}: invalid JSON at line {row}: {e}",
            path.display()
        )))?;
        let text_val = obj.0.get(&schema.text).and_then(|v| v.as_str());
        let label_val = obj.0.get(&schema.label);
        let Some(text_val) = text_val else {
            return Err(Error::MissingColumn {
                path: path.to_path_buf(),
                name: schema.text.clone(),
            });
        };
        let Some(label_val) = label_val else {
            return Err(Error::MissingColumn {
                path: path.to_path_buf(),
                name: schema.label.clone(),
            });
        };
        let label = match label_val {
            serde_json::Value::Number(n) => n.as_u64().and_then(|v| parse_label(&v.to_string())),
            serde_json::Value::String(s) => parse_label(s),
            _ => None,
        };
        match label {
            Some(label) => {
                let mut s = Statement::new(text_val, label);
                s.source_tag = obj
                    .0
                    .get("source")
                    .and_then(|v| v.as_str())
                    .map(str::to_string);
                statements.push(s);
            }
            None => rejected.push(RowDiagnostic {
                row,
                message: format!("label {label_val} outside {{0, 1}}; row rejected"),
            }),
        }
    }
    Ok(LoadOutcome {
        corpus: Corpus::new(statements),
        rejected,
    })
}

fn io_err(path: &Path, e: &csv::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e.to_string()),
    }
}

/// Writes a corpus as CSV with the input schema plus a `normalized` column
/// holding the space-joined token sequence.
pub fn write_split_csv(corpus: &Corpus, path: &Path, schema: &ColumnSchema) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e.to_string()),
    })?;
    let has_source = corpus.statements.iter().any(|s| s.source_tag.is_some());
    let mut header = vec![schema.text.as_str(), schema.label.as_str()];
    if has_source {
        header.push("source");
    }
    header.push("normalized");
    writer.write_record(&header).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    for s in &corpus.statements {
        let label = s.label.to_string();
        let normalized = s.tokens.join(" ");
        let mut record = vec![s.raw_text.as_str(), label.as_str()];
        let tag;
        if has_source {
            tag = s.source_tag.clone().unwrap_or_default();
            record.push(tag.as_str());
        }
        record.push(normalized.as_str());
        writer.write_record(&record).map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
    }
    writer.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}
