use std::path::Path;

use anyhow::{Context, Result};
use wsdetect_core::checkpoint::Checkpoint;
use wsdetect_core::corpus::{load_dataset, ColumnSchema};
use wsdetect_core::eval::{confusion, precision_recall_f1};

pub fn run(model: &Path, data: &Path, out_json: Option<&Path>) -> Result<()> {
    let predictor = Checkpoint::load(model)?.into_predictor()?;
    let outcome = load_dataset(data, &ColumnSchema::default())
        .with_context(|| format!("loading {}", data.display()))?;
    for diag in &outcome.rejected {
        eprintln!("warning: {}: {diag}", data.display());
    }

    let mut preds = Vec::new();
    let mut golds = Vec::new();
    let mut skipped = 0usize;
    for statement in &outcome.corpus.statements {
        match predictor.classify(&statement.raw_text)? {
            Some((_, label)) => {
                preds.push(label);
                golds.push(statement.label);
            }
            None => skipped += 1,
        }
    }
    if skipped > 0 {
        eprintln!("warning: {skipped} statement(s) empty after normalization, skipped");
    }

    let counts = confusion(&preds, &golds)?;
    let (precision, recall, f1) = precision_recall_f1(&counts);
    println!("model: {} ({})", predictor.model_version, model.display());
    println!("evaluated: {} statements", counts.total());
    println!(
        "confusion: tp {} fp {} fn {} tn {}",
        counts.true_pos, counts.false_pos, counts.false_neg, counts.true_neg
    );
    println!("precision: {precision:.4}");
    println!("recall:    {recall:.4}");
    println!("f1:        {f1:.4}");

    if let Some(path) = out_json {
        let obj = serde_json::json!({
            "model": predictor.model_version,
            "evaluated": counts.total(),
            "skipped": skipped,
            "tp": counts.true_pos,
            "fp": counts.false_pos,
            "fn": counts.false_neg,
            "tn": counts.true_neg,
            "precision": precision,
            "recall": recall,
            "f1": f1,
        });
        std::fs::write(path, serde_json::to_string_pretty(&obj)?)
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
