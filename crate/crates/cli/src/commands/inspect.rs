use std::path::Path;

use anyhow::{Context, Result};
use wsdetect_core::embeddings::{parse_embedding_file, Vocabulary};

use crate::paths::resolve_embedding_path;

pub fn run(embeddings: &Path, vocab: Option<&Path>) -> Result<()> {
    let path = resolve_embedding_path(embeddings)?;
    let table = parse_embedding_file(&path)?;
    println!("file: {}", path.display());
    println!("dimension: {}", table.dim());
    println!("tokens: {}", table.len());
    println!("duplicate tokens (last wins): {}", table.duplicate_warnings);

    let mut min_norm = f64::INFINITY;
    let mut max_norm: f64 = 0.0;
    let mut sum_norm = 0.0;
    for token in table.tokens() {
        let vector = table.get(token).expect("listed token present");
        let norm = vector.iter().map(|v| v * v).sum::<f64>().sqrt();
        min_norm = min_norm.min(norm);
        max_norm = max_norm.max(norm);
        sum_norm += norm;
    }
    println!(
        "vector norms: min {:.3} / mean {:.3} / max {:.3}",
        min_norm,
        sum_norm / table.len() as f64,
        max_norm
    );

    if let Some(vocab_path) = vocab {
        let text = std::fs::read_to_string(vocab_path)
            .with_context(|| format!("loading vocabulary dump {}", vocab_path.display()))?;
        let vocabulary = Vocabulary::parse_dump(&text)?;
        let total = vocabulary.len().saturating_sub(2);
        let hits = vocabulary
            .corpus_tokens()
            .filter(|t| table.get(t).is_some())
            .count();
        let coverage = if total == 0 {
            0.0
        } else {
            hits as f64 / total as f64
        };
        println!(
            "vocabulary coverage: {hits}/{total} tokens ({:.1}%)",
            coverage * 100.0
        );
    }
    Ok(())
}
