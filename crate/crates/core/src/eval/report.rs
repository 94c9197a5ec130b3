//! Report formatting: aligned plain-text table for humans, JSON lines for
//! machines.

use serde_json::json;

use super::config::ModelVersion;
use super::experiment::{ExperimentResult, SeedRow};

/// Mean and population standard deviation over an experiment's seeds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Aggregate {
    pub n_seeds: usize,
    pub mean_precision: f64,
    pub std_precision: f64,
    pub mean_recall: f64,
    pub std_recall: f64,
    pub mean_f1: f64,
    pub std_f1: f64,
}

impl Aggregate {
    pub fn over(rows: &[SeedRow]) -> Self {
        if rows.is_empty() {
            return Self::default();
        }
        let n = rows.len() as f64;
        let stat = |get: fn(&SeedRow) -> f64| {
            let mean = rows.iter().map(get).sum::<f64>() / n;
            let var = rows.iter().map(|r| (get(r) - mean).powi(2)).sum::<f64>() / n;
            (mean, var.sqrt())
        };
        let (mean_precision, std_precision) = stat(|r| r.precision);
        let (mean_recall, std_recall) = stat(|r| r.recall);
        let (mean_f1, std_f1) = stat(|r| r.f1);
        Self {
            n_seeds: rows.len(),
            mean_precision,
            std_precision,
            mean_recall,
            std_recall,
            mean_f1,
            std_f1,
        }
    }
}

/// One ladder entry: a completed experiment or the failure message.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub version: ModelVersion,
    pub result: Result<ExperimentResult, String>,
}

/// The Table-1 analog: per-seed rows and aggregates for every ladder
/// entry, in ladder order.
#[derive(Debug, Clone)]
pub struct MetricsReport {
    /// Free-form provenance notes (dataset, substitutions), printed at the
    /// top of the text report.
    pub header: Vec<String>,
    pub entries: Vec<ExperimentOutcome>,
}

impl MetricsReport {
    pub fn mean_f1(&self, version: ModelVersion) -> Option<f64> {
        self.entries.iter().find(|e| e.version == version).and_then(|e| {
            e.result.as_ref().ok().map(|r| r.aggregate.mean_f1)
        })
    }

    pub fn aggregate(&self, version: ModelVersion) -> Option<&Aggregate> {
        self.entries
            .iter()
            .find(|e| e.version == version)
            .and_then(|e| e.result.as_ref().ok().map(|r| &r.aggregate))
    }

    /// Aligned plain-text table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for note in &self.header {
            out.push_str(&format!("# {note}\n"));
        }
        let columns = ["Model", "Description", "Embedding", "Seed", "Precision", "Recall", "F1"];
        let mut rows: Vec<[String; 7]> = Vec::new();
        for entry in &self.entries {
            match &entry.result {
                Ok(result) => {
                    for row in &result.rows {
                        rows.push([
                            row.model.clone(),
                            row.description.clone(),
                            row.embedding.clone(),
                            row.seed.to_string(),
                            format!("{:.4}", row.precision),
                            format!("{:.4}", row.recall),
                            format!("{:.4}", row.f1),
                        ]);
                    }
                    let agg = &result.aggregate;
                    rows.push([
                        entry.version.id().to_string(),
                        entry.version.description().to_string(),
                        entry.version.embedding_mode().to_string(),
                        format!("mean/{}", agg.n_seeds),
                        format!("{:.4}±{:.4}", agg.mean_precision, agg.std_precision),
                        format!("{:.4}±{:.4}", agg.mean_recall, agg.std_recall),
                        format!("{:.4}±{:.4}", agg.mean_f1, agg.std_f1),
                    ]);
                }
                Err(msg) => rows.push([
                    entry.version.id().to_string(),
                    entry.version.description().to_string(),
                    entry.version.embedding_mode().to_string(),
                    "-".to_string(),
                    "failed".to_string(),
                    "failed".to_string(),
                    format!("failed: {msg}"),
                ]),
            }
        }

        let mut widths: Vec<usize> = columns.iter().map(|c| c.len()).collect();
        for row in &rows {
            for (idx, cell) in row.iter().enumerate() {
                widths[idx] = widths[idx].max(cell.chars().count());
            }
        }
        let fmt_row = |cells: &[String]| -> String {
            cells
                .iter()
                .enumerate()
                .map(|(idx, cell)| format!("{cell:<width$}", width = widths[idx]))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        out.push_str(&fmt_row(&columns.map(String::from)));
        out.push('\n');
        out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
        out.push('\n');
        for row in &rows {
            out.push_str(&fmt_row(row.as_slice()));
            out.push('\n');
        }
        out
    }

    /// Machine-readable form: one JSON object per seed row
    /// (`{model, description, embedding, seed, precision, recall, f1,
    /// epochs, wallclock_s, config_hash}`); a failed experiment emits one
    /// object with null metrics and a `failed` message.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for entry in &self.entries {
            match &entry.result {
                Ok(result) => {
                    for row in &result.rows {
                        let obj = json!({
                            "model": row.model,
                            "description": row.description,
                            "embedding": row.embedding,
                            "seed": row.seed,
                            "precision": row.precision,
                            "recall": row.recall,
                            "f1": row.f1,
                            "epochs": row.epochs,
                            "wallclock_s": row.wallclock_s,
                            "config_hash": row.config_hash,
                        });
                        out.push_str(&obj.to_string());
                        out.push('\n');
                    }
                }
                Err(msg) => {
                    let obj = json!({
                        "model": entry.version.id(),
                        "description": entry.version.description(),
                        "embedding": entry.version.embedding_mode().to_string(),
                        "seed": null,
                        "precision": null,
                        "recall": null,
                        "f1": null,
                        "epochs": null,
                        "wallclock_s": null,
                        "config_hash": null,
                        "failed": msg,
                    });
                    out.push_str(&obj.to_string());
                    out.push('\n');
                }
            }
        }
        out
    }
}
