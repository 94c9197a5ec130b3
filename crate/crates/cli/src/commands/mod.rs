pub mod bench;
pub mod classify;
pub mod eval;
pub mod inspect;
pub mod prepare;
pub mod train;

use std::path::Path;

use anyhow::{Context, Result};
use wsdetect_core::corpus::{load_dataset, ColumnSchema, Corpus, SlangMap};

/// Loads a dataset, prints per-row diagnostics, and normalizes it.
pub(crate) fn load_normalized(
    path: &Path,
    schema: &ColumnSchema,
    slang: &SlangMap,
) -> Result<Corpus> {
    let outcome = load_dataset(path, schema)
        .with_context(|| format!("loading {}", path.display()))?;
    for diag in &outcome.rejected {
        eprintln!("warning: {}: {diag}", path.display());
    }
    let mut corpus = outcome.corpus;
    corpus.normalize(slang);
    let dropped = corpus.drop_empty();
    if dropped > 0 {
        eprintln!("warning: {dropped} statement(s) empty after normalization, dropped");
    }
    Ok(corpus)
}

pub(crate) fn load_slang(path: Option<&Path>) -> Result<SlangMap> {
    match path {
        Some(p) => SlangMap::load(p).with_context(|| format!("loading slang map {}", p.display())),
        None => Ok(SlangMap::bundled()),
    }
}
