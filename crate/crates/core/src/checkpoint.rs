//! Model checkpoints: a versioned JSON container holding every parameter
//! tensor with named shapes, the run configuration, the vocabulary (plus
//! its hash), and the slang table — everything `classify` needs to
//! reproduce training-time behavior. Floats round-trip bit-exact.

use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::baselines::{gbdt_predict, GbdtModel, LogRegModel, RegressionTree};
use crate::corpus::SlangMap;
use crate::embeddings::{encode, EmbeddingMatrix, EmbeddingMode, Vocabulary};
use crate::error::{Error, Result};
use crate::nn::{Architecture, AttentionParams, DenseParams, LstmCellParams, ModelParams};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedTensor {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

impl NamedTensor {
    fn from_mat(name: &str, m: &Array2<f64>) -> Self {
        Self {
            name: name.to_string(),
            shape: vec![m.nrows(), m.ncols()],
            data: m.iter().copied().collect(),
        }
    }

    fn from_vec(name: &str, v: &Array1<f64>) -> Self {
        Self {
            name: name.to_string(),
            shape: vec![v.len()],
            data: v.to_vec(),
        }
    }

    fn from_scalar(name: &str, v: f64) -> Self {
        Self {
            name: name.to_string(),
            shape: vec![1],
            data: vec![v],
        }
    }

    fn to_mat(&self) -> Result<Array2<f64>> {
        if self.shape.len() != 2 || self.shape[0] * self.shape[1] != self.data.len() {
            return Err(Error::Checkpoint(format!(
                "tensor {} has inconsistent shape {:?} for {} values",
                self.name,
                self.shape,
                self.data.len()
            )));
        }
        Array2::from_shape_vec((self.shape[0], self.shape[1]), self.data.clone())
            .map_err(|e| Error::Checkpoint(format!("tensor {}: {e}", self.name)))
    }

    fn to_vec1(&self) -> Result<Array1<f64>> {
        if self.shape.len() != 1 || self.shape[0] != self.data.len() {
            return Err(Error::Checkpoint(format!(
                "tensor {} has inconsistent shape {:?}",
                self.name, self.shape
            )));
        }
        Ok(Array1::from_vec(self.data.clone()))
    }

    fn to_scalar(&self) -> Result<f64> {
        if self.data.len() != 1 {
            return Err(Error::Checkpoint(format!(
                "tensor {} is not a scalar",
                self.name
            )));
        }
        Ok(self.data[0])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ModelPayload {
    Nn {
        arch: Architecture,
        dropout_rate: f64,
        tensors: Vec<NamedTensor>,
    },
    LogReg {
        weights: Vec<f64>,
        bias: f64,
    },
    Gbdt {
        base_score: f64,
        learning_rate: f64,
        trees: Vec<RegressionTree>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    /// Ladder id, e.g. "V4b".
    pub model_version: String,
    pub description: String,
    pub embedding_mode: EmbeddingMode,
    pub embedding_dim: usize,
    pub max_len: usize,
    pub trainable_embeddings: bool,
    pub vocab_hash: String,
    /// (token, frequency) pairs in index order; index = position + 2.
    pub vocabulary: Vec<(String, u64)>,
    pub slang: Vec<(String, String)>,
    pub embedding: NamedTensor,
    pub payload: ModelPayload,
}

fn cell_tensors(prefix: &str, cell: &LstmCellParams, out: &mut Vec<NamedTensor>) {
    for (name, t) in cell.tensors() {
        match t {
            crate::nn::TensorRef::Mat(m) => {
                out.push(NamedTensor::from_mat(&format!("{prefix}.{name}"), m))
            }
            crate::nn::TensorRef::Vec(v) => {
                out.push(NamedTensor::from_vec(&format!("{prefix}.{name}"), v))
            }
        }
    }
}

impl Checkpoint {
    pub fn for_nn(
        model_version: &str,
        description: &str,
        max_len: usize,
        vocab: &Vocabulary,
        slang: &SlangMap,
        params: &ModelParams,
    ) -> Self {
        let mut tensors = Vec::new();
        for (idx, cell) in params.cells.iter().enumerate() {
            cell_tensors(&format!("cell{idx}"), cell, &mut tensors);
        }
        if let Some(attn) = &params.attention {
            tensors.push(NamedTensor::from_mat("attention.w", &attn.w));
            tensors.push(NamedTensor::from_vec("attention.v", &attn.v));
        }
        tensors.push(NamedTensor::from_vec("dense.w", &params.dense.w));
        tensors.push(NamedTensor::from_scalar("dense.b", params.dense.b));

        Self {
            format_version: FORMAT_VERSION,
            model_version: model_version.to_string(),
            description: description.to_string(),
            embedding_mode: params.embedding.mode,
            embedding_dim: params.embedding.dim(),
            max_len,
            trainable_embeddings: params.embedding.trainable,
            vocab_hash: vocab.hash(),
            vocabulary: vocab.entries(),
            slang: slang.pairs(),
            embedding: NamedTensor::from_mat("embedding", &params.embedding.rows),
            payload: ModelPayload::Nn {
                arch: params.arch,
                dropout_rate: params.dropout_rate,
                tensors,
            },
        }
    }

    pub fn for_logreg(
        model_version: &str,
        description: &str,
        max_len: usize,
        vocab: &Vocabulary,
        slang: &SlangMap,
        matrix: &EmbeddingMatrix,
        model: &LogRegModel,
    ) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            model_version: model_version.to_string(),
            description: description.to_string(),
            embedding_mode: matrix.mode,
            embedding_dim: matrix.dim(),
            max_len,
            trainable_embeddings: matrix.trainable,
            vocab_hash: vocab.hash(),
            vocabulary: vocab.entries(),
            slang: slang.pairs(),
            embedding: NamedTensor::from_mat("embedding", &matrix.rows),
            payload: ModelPayload::LogReg {
                weights: model.weights.to_vec(),
                bias: model.bias,
            },
        }
    }

    pub fn for_gbdt(
        model_version: &str,
        description: &str,
        max_len: usize,
        vocab: &Vocabulary,
        slang: &SlangMap,
        matrix: &EmbeddingMatrix,
        model: &GbdtModel,
    ) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            model_version: model_version.to_string(),
            description: description.to_string(),
            embedding_mode: matrix.mode,
            embedding_dim: matrix.dim(),
            max_len,
            trainable_embeddings: matrix.trainable,
            vocab_hash: vocab.hash(),
            vocabulary: vocab.entries(),
            slang: slang.pairs(),
            embedding: NamedTensor::from_mat("embedding", &matrix.rows),
            payload: ModelPayload::Gbdt {
                base_score: model.base_score,
                learning_rate: model.learning_rate,
                trees: model.trees.clone(),
            },
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string(self)
            .map_err(|e| Error::Checkpoint(format!("serialize: {e}")))?;
        std::fs::write(path, json).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let ckpt: Checkpoint = serde_json::from_str(&text)
            .map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
        if ckpt.format_version != FORMAT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported format version {}",
                ckpt.format_version
            )));
        }
        Ok(ckpt)
    }

    /// Rebuilds the runnable predictor (vocabulary, slang map, parameters).
    pub fn into_predictor(self) -> Result<Predictor> {
        let vocab = Vocabulary::from_entries(self.vocabulary.clone());
        if vocab.hash() != self.vocab_hash {
            return Err(Error::Checkpoint(
                "vocabulary hash does not match stored vocabulary".into(),
            ));
        }
        let slang = SlangMap::new(self.slang.iter().cloned());
        let rows = self.embedding.to_mat()?;
        if rows.nrows() != vocab.len() || rows.ncols() != self.embedding_dim {
            return Err(Error::Checkpoint("embedding shape mismatch".into()));
        }
        let matrix = EmbeddingMatrix {
            rows,
            mode: self.embedding_mode,
            trainable: self.trainable_embeddings,
            coverage: None,
        };

        let kind = match &self.payload {
            ModelPayload::LogReg { weights, bias } => PredictorKind::LogReg(LogRegModel {
                weights: Array1::from_vec(weights.clone()),
                bias: *bias,
            }),
            ModelPayload::Gbdt {
                base_score,
                learning_rate,
                trees,
            } => PredictorKind::Gbdt(GbdtModel {
                trees: trees.clone(),
                learning_rate: *learning_rate,
                base_score: *base_score,
            }),
            ModelPayload::Nn {
                arch,
                dropout_rate,
                tensors,
            } => {
                let find = |name: &str| -> Result<&NamedTensor> {
                    tensors
                        .iter()
                        .find(|t| t.name == name)
                        .ok_or_else(|| Error::Checkpoint(format!("missing tensor {name}")))
                };
                let n_cells = match arch {
                    Architecture::StackedLstm { .. } => 2,
                    Architecture::BiLstm { .. } | Architecture::BiLstmAttention { .. } => 2,
                };
                let mut cells = Vec::with_capacity(n_cells);
                for idx in 0..n_cells {
                    let get_m = |suffix: &str| find(&format!("cell{idx}.{suffix}"))?.to_mat();
                    let get_v = |suffix: &str| find(&format!("cell{idx}.{suffix}"))?.to_vec1();
                    cells.push(LstmCellParams {
                        w_i: get_m("w_i")?,
                        w_f: get_m("w_f")?,
                        w_o: get_m("w_o")?,
                        w_g: get_m("w_g")?,
                        u_i: get_m("u_i")?,
                        u_f: get_m("u_f")?,
                        u_o: get_m("u_o")?,
                        u_g: get_m("u_g")?,
                        b_i: get_v("b_i")?,
                        b_f: get_v("b_f")?,
                        b_o: get_v("b_o")?,
                        b_g: get_v("b_g")?,
                    });
                }
                let attention = match arch {
                    Architecture::BiLstmAttention { .. } => Some(AttentionParams {
                        w: find("attention.w")?.to_mat()?,
                        v: find("attention.v")?.to_vec1()?,
                    }),
                    _ => None,
                };
                let dense = DenseParams {
                    w: find("dense.w")?.to_vec1()?,
                    b: find("dense.b")?.to_scalar()?,
                };
                PredictorKind::Nn(Box::new(ModelParams {
                    arch: *arch,
                    embedding: matrix.clone(),
                    cells,
                    attention,
                    dense,
                    dropout_rate: *dropout_rate,
                }))
            }
        };

        Ok(Predictor {
            model_version: self.model_version,
            vocab,
            slang,
            matrix,
            max_len: self.max_len,
            kind,
        })
    }
}

pub enum PredictorKind {
    Nn(Box<ModelParams>),
    LogReg(LogRegModel),
    Gbdt(GbdtModel),
}

/// A loaded checkpoint ready to classify raw text with the exact
/// normalization pipeline used at training time.
pub struct Predictor {
    pub model_version: String,
    pub vocab: Vocabulary,
    pub slang: SlangMap,
    pub matrix: EmbeddingMatrix,
    pub max_len: usize,
    pub kind: PredictorKind,
}

impl Predictor {
    /// Probability and hard label for one raw line. Returns `None` when
    /// the line normalizes to an empty token list.
    pub fn classify(&self, raw: &str) -> Result<Option<(f64, u8)>> {
        let tokens = crate::corpus::normalize_statement(raw, &self.slang);
        if tokens.is_empty() {
            return Ok(None);
        }
        let p = match &self.kind {
            PredictorKind::Nn(params) => {
                let seq = encode(&tokens, &self.vocab, self.max_len);
                params.predict(&seq)?.0
            }
            PredictorKind::LogReg(model) => {
                let x = crate::baselines::mean_embedding(&tokens, &self.vocab, &self.matrix);
                model.predict_proba(&x)
            }
            PredictorKind::Gbdt(model) => {
                let x = crate::baselines::mean_embedding(&tokens, &self.vocab, &self.matrix);
                gbdt_predict(model, &x)
            }
        };
        Ok(Some((p, u8::from(p >= 0.5))))
    }
}
