//! Embedding-file parsing (GloVe text format), vocabulary construction,
//! and initial embedding matrices under random / glove / gn-glove modes.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use ndarray::{Array1, Array2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Reserved vocabulary index for padding. Its embedding row is always zero.
pub const PAD_INDEX: usize = 0;
/// Reserved vocabulary index for out-of-vocabulary tokens.
pub const OOV_INDEX: usize = 1;

/// Range of the uniform distribution used for randomly initialized rows.
pub const RANDOM_INIT_BOUND: f64 = 0.25;

/// A token -> vector table parsed from a GloVe-format text file.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dim: usize,
    entries: HashMap<String, Vec<f64>>,
    /// First-occurrence token order, for stable serialization.
    order: Vec<String>,
    /// Number of duplicate tokens encountered while parsing (last vector wins).
    pub duplicate_warnings: usize,
}

impl PartialEq for EmbeddingTable {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.entries == other.entries
    }
}

impl EmbeddingTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.entries.get(token).map(Vec::as_slice)
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(String::as_str)
    }

    /// Writes the table in the GloVe text format at full float precision,
    /// so that parsing the output reproduces the table exactly.
    pub fn serialize<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for token in &self.order {
            write!(out, "{token}")?;
            for v in &self.entries[token] {
                write!(out, " {v}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Parses a GloVe-format embedding file: one `token v1 .. vd` line per
/// token, dimension inferred from the first line. A `.gz` suffix selects
/// gzip decompression. Duplicate tokens overwrite earlier entries and are
/// counted as warnings.
pub fn parse_embedding_file(path: &Path) -> Result<EmbeddingTable> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader: Box<dyn Read> = if path.extension().and_then(|e| e.to_str()) == Some("gz") {
        Box::new(flate2::read::GzDecoder::new(file))
    } else {
        Box::new(file)
    };
    parse_embedding_reader(BufReader::new(reader), path)
}

fn parse_embedding_reader<R: BufRead>(reader: R, path: &Path) -> Result<EmbeddingTable> {
    let mut dim = 0usize;
    let mut entries: HashMap<String, Vec<f64>> = HashMap::new();
    let mut order: Vec<String> = Vec::new();
    let mut duplicates = 0usize;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let token = fields.next().expect("non-empty line has a first field");
        let mut vector = Vec::new();
        for field in fields {
            let value: f64 = field.parse().map_err(|_| Error::InvalidNumber {
                path: path.to_path_buf(),
                line: line_no,
                field: field.to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::InvalidNumber {
                    path: path.to_path_buf(),
                    line: line_no,
                    field: field.to_string(),
                });
            }
            vector.push(value);
        }
        if entries.is_empty() {
            dim = vector.len();
            if dim == 0 {
                return Err(Error::InvalidNumber {
                    path: path.to_path_buf(),
                    line: line_no,
                    field: "<no vector components>".to_string(),
                });
            }
        } else if vector.len() != dim {
            return Err(Error::DimensionMismatch {
                path: path.to_path_buf(),
                line: line_no,
                expected: dim,
                found: vector.len(),
            });
        }
        if entries.insert(token.to_string(), vector).is_some() {
            duplicates += 1;
        } else {
            order.push(token.to_string());
        }
    }

    if entries.is_empty() {
        return Err(Error::EmptyEmbeddingFile {
            path: path.to_path_buf(),
        });
    }
    Ok(EmbeddingTable {
        dim,
        entries,
        order,
        duplicate_warnings: duplicates,
    })
}

/// Token <-> index bijection with reserved padding (0) and OOV (1) slots.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    token_to_index: HashMap<String, usize>,
    index_to_token: Vec<String>,
    /// Corpus frequency per index; 0 for the reserved slots.
    frequencies: Vec<u64>,
}

impl Vocabulary {
    pub const PAD_TOKEN: &'static str = "<pad>";
    pub const OOV_TOKEN: &'static str = "<oov>";

    /// Number of rows including the two reserved slots.
    pub fn len(&self) -> usize {
        self.index_to_token.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= 2
    }

    /// Index for a token; absent tokens map to the OOV index.
    pub fn index(&self, token: &str) -> usize {
        self.token_to_index.get(token).copied().unwrap_or(OOV_INDEX)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.token_to_index.contains_key(token)
    }

    pub fn token(&self, index: usize) -> Option<&str> {
        self.index_to_token.get(index).map(String::as_str)
    }

    pub fn frequency(&self, index: usize) -> u64 {
        self.frequencies.get(index).copied().unwrap_or(0)
    }

    /// Corpus tokens in index order (reserved slots excluded).
    pub fn corpus_tokens(&self) -> impl Iterator<Item = &str> {
        self.index_to_token[2..].iter().map(String::as_str)
    }

    /// Rebuilds a vocabulary from `(token, frequency)` pairs in index order
    /// (index = position + 2).
    pub fn from_entries(entries: Vec<(String, u64)>) -> Self {
        let mut index_to_token = vec![Self::PAD_TOKEN.to_string(), Self::OOV_TOKEN.to_string()];
        let mut frequencies = vec![0u64, 0u64];
        let mut token_to_index = HashMap::new();
        for (token, freq) in entries {
            token_to_index.insert(token.clone(), index_to_token.len());
            index_to_token.push(token);
            frequencies.push(freq);
        }
        Self {
            token_to_index,
            index_to_token,
            frequencies,
        }
    }

    pub fn entries(&self) -> Vec<(String, u64)> {
        self.index_to_token[2..]
            .iter()
            .zip(&self.frequencies[2..])
            .map(|(t, &f)| (t.clone(), f))
            .collect()
    }

    /// Dump format: one `token<TAB>index<TAB>frequency` line per token,
    /// reserved slots included.
    pub fn dump<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (idx, token) in self.index_to_token.iter().enumerate() {
            writeln!(out, "{token}\t{idx}\t{}", self.frequencies[idx])?;
        }
        Ok(())
    }

    /// SHA-256 of the dump bytes, used to tie checkpoints to vocabularies.
    pub fn hash(&self) -> String {
        let mut bytes = Vec::new();
        self.dump(&mut bytes).expect("writing to Vec cannot fail");
        let digest = Sha256::digest(&bytes);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Parses the dump format back into a vocabulary.
    pub fn parse_dump(text: &str) -> Result<Self> {
        let mut entries: Vec<(usize, String, u64)> = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [token, index, freq] = fields.as_slice() else {
                return Err(Error::InvalidParameter(format!(
                    "vocabulary dump line {}: expected token<TAB>index<TAB>frequency",
                    line_no + 1
                )));
            };
            let index: usize = index.parse().map_err(|_| {
                Error::InvalidParameter(format!("vocabulary dump line {}: bad index", line_no + 1))
            })?;
            let freq: u64 = freq.parse().map_err(|_| {
                Error::InvalidParameter(format!(
                    "vocabulary dump line {}: bad frequency",
                    line_no + 1
                ))
            })?;
            entries.push((index, token.to_string(), freq));
        }
        entries.sort_by_key(|(idx, _, _)| *idx);
        let corpus_entries = entries
            .into_iter()
            .filter(|(idx, _, _)| *idx >= 2)
            .map(|(_, token, freq)| (token, freq))
            .collect();
        Ok(Self::from_entries(corpus_entries))
    }
}

/// Builds a vocabulary from a normalized corpus: tokens with frequency
/// >= `min_freq`, ordered by descending frequency then lexicographically.
pub fn build_vocab(corpus: &crate::corpus::Corpus, min_freq: u64) -> Result<Vocabulary> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if min_freq == 0 {
        return Err(Error::InvalidParameter(
            "min_freq must be a positive integer".to_string(),
        ));
    }
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for s in &corpus.statements {
        for t in &s.tokens {
            *counts.entry(t.as_str()).or_insert(0) += 1;
        }
    }
    let mut admitted: Vec<(&str, u64)> = counts
        .into_iter()
        .filter(|&(_, c)| c >= min_freq)
        .collect();
    admitted.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    Ok(Vocabulary::from_entries(
        admitted
            .into_iter()
            .map(|(t, f)| (t.to_string(), f))
            .collect(),
    ))
}

/// How the embedding matrix rows are initialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingMode {
    Random,
    Glove,
    GnGlove,
}

impl std::fmt::Display for EmbeddingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EmbeddingMode::Random => write!(f, "random"),
            EmbeddingMode::Glove => write!(f, "glove"),
            EmbeddingMode::GnGlove => write!(f, "gn-glove"),
        }
    }
}

impl std::str::FromStr for EmbeddingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(EmbeddingMode::Random),
            "glove" => Ok(EmbeddingMode::Glove),
            "gn-glove" | "gn_glove" => Ok(EmbeddingMode::GnGlove),
            other => Err(Error::InvalidParameter(format!(
                "unknown embedding mode {other:?}"
            ))),
        }
    }
}

/// The model's initial embedding matrix: one row per vocabulary index.
/// Row 0 (padding) is zero and stays zero through training.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    pub rows: Array2<f64>,
    pub mode: EmbeddingMode,
    pub trainable: bool,
    /// Fraction of corpus tokens found in the pretrained table
    /// (None in random mode).
    pub coverage: Option<f64>,
}

impl EmbeddingMatrix {
    pub fn dim(&self) -> usize {
        self.rows.ncols()
    }

    pub fn vocab_size(&self) -> usize {
        self.rows.nrows()
    }

    pub fn row(&self, index: usize) -> ndarray::ArrayView1<'_, f64> {
        self.rows.row(index)
    }
}

/// Constructs the initial embedding matrix for a vocabulary.
///
/// Every non-padding row is first drawn i.i.d. uniform on
/// [-0.25, 0.25] from `seed`; in glove / gn-glove modes, vocabulary tokens
/// present in the table then copy their vectors exactly. The OOV row keeps
/// its random draw in all modes, and row 0 is zero.
pub fn build_matrix(
    vocab: &Vocabulary,
    table: Option<&EmbeddingTable>,
    dim: usize,
    mode: EmbeddingMode,
    seed: u64,
) -> Result<EmbeddingMatrix> {
    if dim == 0 {
        return Err(Error::InvalidParameter("embedding dim must be positive".into()));
    }
    if mode != EmbeddingMode::Random {
        let table = table.ok_or_else(|| {
            Error::InvalidParameter(format!("mode {mode} requires an embedding table"))
        })?;
        if table.dim() != dim {
            return Err(Error::EmbeddingDimMismatch {
                requested: dim,
                table: table.dim(),
            });
        }
    }

    let n = vocab.len();
    let mut rows = Array2::zeros((n, dim));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 1..n {
        for v in rows.row_mut(i).iter_mut() {
            *v = rng.random_range(-RANDOM_INIT_BOUND..RANDOM_INIT_BOUND);
        }
    }

    let coverage = if mode == EmbeddingMode::Random {
        None
    } else {
        let table = table.expect("checked above");
        let mut hits = 0usize;
        let mut total = 0usize;
        for (offset, token) in vocab.corpus_tokens().enumerate() {
            total += 1;
            if let Some(vector) = table.get(token) {
                hits += 1;
                let mut row = rows.row_mut(offset + 2);
                for (slot, &v) in row.iter_mut().zip(vector) {
                    *slot = v;
                }
            }
        }
        Some(if total == 0 { 0.0 } else { hits as f64 / total as f64 })
    };

    Ok(EmbeddingMatrix {
        rows,
        mode,
        trainable: true,
        coverage,
    })
}

/// A fixed-length index encoding of a token sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodedSeq {
    pub ids: Vec<usize>,
    pub valid: usize,
}

impl EncodedSeq {
    pub fn embed(&self, matrix: &EmbeddingMatrix) -> Vec<Array1<f64>> {
        self.ids[..self.valid]
            .iter()
            .map(|&id| matrix.rows.row(id).to_owned())
            .collect()
    }
}

/// Maps tokens to vocabulary indices, truncating from the right at
/// `max_len` and right-padding with the padding index.
pub fn encode(tokens: &[String], vocab: &Vocabulary, max_len: usize) -> EncodedSeq {
    assert!(max_len >= 1, "max_len must be >= 1");
    let valid = tokens.len().min(max_len);
    let mut ids = Vec::with_capacity(max_len);
    for t in &tokens[..valid] {
        ids.push(vocab.index(t));
    }
    ids.resize(max_len, PAD_INDEX);
    EncodedSeq { ids, valid }
}
