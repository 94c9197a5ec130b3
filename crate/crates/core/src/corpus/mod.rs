//! Labeled statement corpus: loading, normalization, deduplication, and
//! stratified train/test splitting.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod io;
mod normalize;

pub use io::{load_dataset, write_split_csv, ColumnSchema, LoadOutcome, RowDiagnostic};
pub use normalize::{normalize_statement, SlangMap};

/// One labeled example: the raw text, its normalized tokens, and a binary
/// label (1 = sexist, 0 = neutral).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statement {
    pub raw_text: String,
    pub tokens: Vec<String>,
    pub label: u8,
    /// Optional provenance string carried through from the source file.
    pub source_tag: Option<String>,
}

impl Statement {
    pub fn new(raw_text: impl Into<String>, label: u8) -> Self {
        Self {
            raw_text: raw_text.into(),
            tokens: Vec::new(),
            label,
            source_tag: None,
        }
    }
}

/// An ordered collection of statements.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub statements: Vec<Statement>,
}

impl Corpus {
    pub fn new(statements: Vec<Statement>) -> Self {
        Self { statements }
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    /// Runs the normalization pipeline over every statement in place.
    pub fn normalize(&mut self, slang: &SlangMap) {
        for s in &mut self.statements {
            s.tokens = normalize_statement(&s.raw_text, slang);
        }
    }

    /// Drops statements whose token list is empty after normalization.
    /// Returns the number of dropped statements.
    pub fn drop_empty(&mut self) -> usize {
        let before = self.statements.len();
        self.statements.retain(|s| !s.tokens.is_empty());
        before - self.statements.len()
    }

    pub fn labels(&self) -> Vec<u8> {
        self.statements.iter().map(|s| s.label).collect()
    }
}

/// Class proportions `(fraction sexist, fraction neutral)`.
///
/// The two fractions sum to 1 within 1e-12. Errors on an empty corpus.
pub fn class_balance(corpus: &Corpus) -> Result<(f64, f64)> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let n = corpus.len() as f64;
    let sexist = corpus.statements.iter().filter(|s| s.label == 1).count() as f64;
    Ok((sexist / n, (n - sexist) / n))
}

/// Removes statements whose normalized token sequence already occurred
/// earlier in the corpus. The first occurrence is kept and relative order
/// is otherwise preserved. Returns the deduplicated corpus and the number
/// of dropped statements.
pub fn deduplicate(corpus: &Corpus) -> (Corpus, usize) {
    let mut seen = std::collections::HashSet::new();
    let mut kept = Vec::with_capacity(corpus.len());
    let mut dropped = 0;
    for s in &corpus.statements {
        if seen.insert(s.tokens.clone()) {
            kept.push(s.clone());
        } else {
            dropped += 1;
        }
    }
    (Corpus::new(kept), dropped)
}

/// A stratified train/test partition of a corpus.
#[derive(Debug, Clone)]
pub struct SplitPair {
    pub train: Corpus,
    pub test: Corpus,
    pub seed: u64,
    pub ratio: f64,
}

impl SplitPair {
    /// |class-proportion(train) - class-proportion(test)|.
    pub fn class_proportion_gap(&self) -> f64 {
        let p_train = class_balance(&self.train).map(|(p, _)| p).unwrap_or(0.0);
        let p_test = class_balance(&self.test).map(|(p, _)| p).unwrap_or(0.0);
        (p_train - p_test).abs()
    }
}

/// Splits a corpus into train/test with per-class shuffling and
/// proportional allocation. Deterministic given (corpus order, ratio,
/// seed). Requires at least two statements of each class so both sides
/// of the split receive at least one.
pub fn stratified_split(corpus: &Corpus, ratio: f64, seed: u64) -> Result<SplitPair> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidRatio(ratio));
    }
    let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (idx, s) in corpus.statements.iter().enumerate() {
        by_class[s.label as usize].push(idx);
    }
    for label in 0..2u8 {
        let count = by_class[label as usize].len();
        if count < 2 {
            return Err(Error::ClassTooSmall { label, count });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    for indices in by_class.iter_mut() {
        indices.shuffle(&mut rng);
        let n = indices.len();
        let take = ((ratio * n as f64).round() as usize).clamp(1, n - 1);
        train_idx.extend_from_slice(&indices[..take]);
        test_idx.extend_from_slice(&indices[take..]);
    }
    // splits keep the original corpus order
    train_idx.sort_unstable();
    test_idx.sort_unstable();

    let pick = |idx: &[usize]| Corpus::new(idx.iter().map(|&i| corpus.statements[i].clone()).collect());
    Ok(SplitPair {
        train: pick(&train_idx),
        test: pick(&test_idx),
        seed,
        ratio,
    })
}
