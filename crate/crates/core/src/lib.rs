//! From-scratch workplace-sexism statement classification: corpus
//! normalization and splitting, GloVe-format embedding handling,
//! LSTM / BiLSTM / BiLSTM+attention models with exact backpropagation,
//! mean-embedding baselines (logistic regression, GBDT), and an
//! experiment harness that reproduces the full nine-version ladder.

pub mod baselines;
pub mod checkpoint;
pub mod corpus;
pub mod embeddings;
pub mod error;
pub mod eval;
pub mod nn;

pub use error::{Error, Result};
