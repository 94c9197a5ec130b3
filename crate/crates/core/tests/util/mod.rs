//! Shared helpers for integration tests.

use wsdetect_core::corpus::{Corpus, SlangMap, Statement};
use wsdetect_core::embeddings::{build_vocab, Vocabulary};

/// A tiny normalized corpus plus its vocabulary; tokens are
/// alpha/beta/gamma/delta/epsilon.
#[allow(dead_code)]
pub fn tiny_setup(_dim: usize) -> (Vocabulary, Corpus) {
    let slang = SlangMap::empty();
    let mut corpus = Corpus::new(vec![
        Statement::new("alpha beta gamma", 1),
        Statement::new("beta delta epsilon", 0),
        Statement::new("alpha gamma delta", 1),
        Statement::new("epsilon beta alpha", 0),
    ]);
    corpus.normalize(&slang);
    let vocab = build_vocab(&corpus, 1).unwrap();
    (vocab, corpus)
}

/// Splits a space-separated string into owned tokens.
#[allow(dead_code)]
pub fn toks(s: &str) -> Vec<String> {
    if s.is_empty() {
        Vec::new()
    } else {
        s.split(' ').map(str::to_string).collect()
    }
}
