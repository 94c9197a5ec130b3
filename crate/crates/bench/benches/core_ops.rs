//! Micro-benchmarks for the hot paths: normalization, the BiLSTM+attention
//! forward/backward pass, and mean-embedding features.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wsdetect_core::baselines::mean_embedding;
use wsdetect_core::corpus::{normalize_statement, Corpus, SlangMap, Statement};
use wsdetect_core::embeddings::{build_matrix, build_vocab, encode, EmbeddingMode, Vocabulary};
use wsdetect_core::nn::{Architecture, ModelParams};

fn bench_corpus(vocab_size: usize) -> Corpus {
    let slang = SlangMap::empty();
    let words: Vec<String> = (0..vocab_size).map(|i| format!("word{i}")).collect();
    let mut statements = Vec::new();
    for i in 0..64 {
        let text: Vec<&str> = (0..16).map(|j| words[(i * 16 + j) % vocab_size].as_str()).collect();
        statements.push(Statement::new(text.join(" "), (i % 2) as u8));
    }
    let mut corpus = Corpus::new(statements);
    corpus.normalize(&slang);
    corpus
}

fn setup_model(hidden: usize) -> (ModelParams, Vocabulary) {
    let corpus = bench_corpus(256);
    let vocab = build_vocab(&corpus, 1).unwrap();
    let matrix = build_matrix(&vocab, None, 100, EmbeddingMode::Random, 7).unwrap();
    let model = ModelParams::init(
        Architecture::BiLstmAttention {
            hidden,
            attn_dim: hidden,
        },
        matrix,
        0.5,
        7,
    )
    .unwrap();
    (model, vocab)
}

fn normalization(c: &mut Criterion) {
    let slang = SlangMap::bundled();
    let raw = "U won't BELIEVE what the new #quarterly report says about https://example.com/q3 @sam, it's due Friday!";
    c.bench_function("normalize_statement", |b| {
        b.iter(|| normalize_statement(black_box(raw), &slang))
    });
}

fn forward_backward(c: &mut Criterion) {
    let (model, vocab) = setup_model(64);
    let tokens: Vec<String> = (0..20).map(|i| format!("word{}", i * 11 % 256)).collect();
    let seq = encode(&tokens, &vocab, 48);

    c.bench_function("bilstm_attn_forward_eval_h64_len20", |b| {
        b.iter(|| model.forward_eval(black_box(&seq)).unwrap())
    });

    c.bench_function("bilstm_attn_forward_backward_h64_len20", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        b.iter(|| {
            let trace = model.forward_train(black_box(&seq), &mut rng).unwrap();
            model.backward(&trace, 1).unwrap()
        })
    });
}

fn features(c: &mut Criterion) {
    let (model, vocab) = setup_model(8);
    let tokens: Vec<String> = (0..20).map(|i| format!("word{}", i * 7 % 256)).collect();
    c.bench_function("mean_embedding_dim100_len20", |b| {
        b.iter(|| mean_embedding(black_box(&tokens), &vocab, &model.embedding))
    });
}

criterion_group!(benches, normalization, forward_backward, features);
criterion_main!(benches);
