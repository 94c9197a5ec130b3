//! Model architectures (stacked LSTM, BiLSTM, BiLSTM+attention), their
//! forward passes with retained traces, and exact backpropagation.

use ndarray::{Array1, Array2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embeddings::{EmbeddingMatrix, EncodedSeq, PAD_INDEX};
use crate::error::{Error, Result};

use super::attention::{attention_backward, attention_forward, AttentionParams, AttentionTrace};
use super::dense::{dense_backward, dense_sigmoid_forward, DenseParams};
use super::dropout::{dropout, Phase};
use super::loss::bce_logit_grad;
use super::lstm::{concat, layer_backward, run_layer, Direction, GateTrace, LstmCellParams};

/// The deep architectures: two stacked unidirectional LSTM layers, one
/// bidirectional layer pooled by final states, or one bidirectional layer
/// pooled by additive attention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Architecture {
    StackedLstm { hidden1: usize, hidden2: usize },
    BiLstm { hidden: usize },
    BiLstmAttention { hidden: usize, attn_dim: usize },
}

impl Architecture {
    /// Input dimension of the final dense layer.
    pub fn pooled_dim(&self) -> usize {
        match *self {
            Architecture::StackedLstm { hidden2, .. } => hidden2,
            Architecture::BiLstm { hidden } => 2 * hidden,
            Architecture::BiLstmAttention { hidden, .. } => 2 * hidden,
        }
    }
}

/// The full parameter set of one deep model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub arch: Architecture,
    pub embedding: EmbeddingMatrix,
    /// StackedLstm: [layer1, layer2]; BiLstm*: [forward, backward].
    pub cells: Vec<LstmCellParams>,
    pub attention: Option<AttentionParams>,
    pub dense: DenseParams,
    pub dropout_rate: f64,
}

impl ModelParams {
    /// Initializes a model around an embedding matrix. Recurrent and dense
    /// parameters are drawn from `seed`; the embedding matrix is used as
    /// provided.
    pub fn init(
        arch: Architecture,
        embedding: EmbeddingMatrix,
        dropout_rate: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(0.0..1.0).contains(&dropout_rate) {
            return Err(Error::InvalidDropoutRate(dropout_rate));
        }
        let dim = embedding.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (cells, attention) = match arch {
            Architecture::StackedLstm { hidden1, hidden2 } => {
                if hidden1 == 0 || hidden2 == 0 {
                    return Err(Error::InvalidParameter("hidden sizes must be positive".into()));
                }
                (
                    vec![
                        LstmCellParams::init(dim, hidden1, &mut rng),
                        LstmCellParams::init(hidden1, hidden2, &mut rng),
                    ],
                    None,
                )
            }
            Architecture::BiLstm { hidden } => {
                if hidden == 0 {
                    return Err(Error::InvalidParameter("hidden size must be positive".into()));
                }
                (
                    vec![
                        LstmCellParams::init(dim, hidden, &mut rng),
                        LstmCellParams::init(dim, hidden, &mut rng),
                    ],
                    None,
                )
            }
            Architecture::BiLstmAttention { hidden, attn_dim } => {
                if hidden == 0 || attn_dim == 0 {
                    return Err(Error::InvalidParameter("layer sizes must be positive".into()));
                }
                (
                    vec![
                        LstmCellParams::init(dim, hidden, &mut rng),
                        LstmCellParams::init(dim, hidden, &mut rng),
                    ],
                    Some(AttentionParams::init(attn_dim, 2 * hidden, &mut rng)),
                )
            }
        };
        let dense = DenseParams::init(arch.pooled_dim(), &mut rng);
        Ok(Self {
            arch,
            embedding,
            cells,
            attention,
            dense,
            dropout_rate,
        })
    }

    pub fn forward_eval(&self, seq: &EncodedSeq) -> Result<ForwardTrace> {
        // rng is never consulted in eval mode
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        self.forward(seq, Phase::Eval, &mut rng)
    }

    pub fn forward_train(&self, seq: &EncodedSeq, rng: &mut ChaCha8Rng) -> Result<ForwardTrace> {
        self.forward(seq, Phase::Train, rng)
    }

    fn forward(&self, seq: &EncodedSeq, phase: Phase, rng: &mut ChaCha8Rng) -> Result<ForwardTrace> {
        if seq.valid == 0 {
            return Err(Error::EmptySequence);
        }
        let xs0 = seq.embed(&self.embedding);
        let mut trace = ForwardTrace {
            ids: seq.ids.clone(),
            valid: seq.valid,
            xs0,
            steps_a: Vec::new(),
            steps_b: Vec::new(),
            xs_b: None,
            mid_masks: None,
            attention: None,
            pooled: Array1::zeros(0),
            pooled_mask: None,
            dense_input: Array1::zeros(0),
            logit: 0.0,
            probability: 0.0,
        };

        match self.arch {
            Architecture::StackedLstm { .. } => {
                trace.steps_a = run_layer(&trace.xs0, &self.cells[0], Direction::Forward)?;
                let mut xs_b = Vec::with_capacity(seq.valid);
                let mut masks = Vec::with_capacity(seq.valid);
                for step in &trace.steps_a {
                    let (dropped, mask) = dropout(&step.h, self.dropout_rate, phase, rng)?;
                    xs_b.push(dropped);
                    if let Some(mask) = mask {
                        masks.push(mask);
                    }
                }
                trace.steps_b = run_layer(&xs_b, &self.cells[1], Direction::Forward)?;
                trace.mid_masks = (!masks.is_empty()).then_some(masks);
                trace.xs_b = Some(xs_b);
                trace.pooled = trace.steps_b[seq.valid - 1].h.clone();
            }
            Architecture::BiLstm { .. } => {
                trace.steps_a = run_layer(&trace.xs0, &self.cells[0], Direction::Forward)?;
                trace.steps_b = run_layer(&trace.xs0, &self.cells[1], Direction::Backward)?;
                // final state of each direction
                trace.pooled = concat(&trace.steps_a[seq.valid - 1].h, &trace.steps_b[0].h);
            }
            Architecture::BiLstmAttention { .. } => {
                trace.steps_a = run_layer(&trace.xs0, &self.cells[0], Direction::Forward)?;
                trace.steps_b = run_layer(&trace.xs0, &self.cells[1], Direction::Backward)?;
                let states: Vec<Array1<f64>> = (0..seq.valid)
                    .map(|t| concat(&trace.steps_a[t].h, &trace.steps_b[t].h))
                    .collect();
                let attn = attention_forward(
                    &states,
                    seq.valid,
                    self.attention.as_ref().expect("attention arch has params"),
                )?;
                trace.pooled = attn.context.clone();
                trace.attention = Some((states, attn));
            }
        }

        let (dense_input, pooled_mask) = dropout(&trace.pooled, self.dropout_rate, phase, rng)?;
        let (logit, probability) = dense_sigmoid_forward(&dense_input, &self.dense)?;
        trace.dense_input = dense_input;
        trace.pooled_mask = pooled_mask;
        trace.logit = logit;
        trace.probability = probability;
        Ok(trace)
    }

    /// Eval-mode probability and the label at threshold 0.5 (ties go to
    /// the positive class).
    pub fn predict(&self, seq: &EncodedSeq) -> Result<(f64, u8)> {
        let trace = self.forward_eval(seq)?;
        Ok((trace.probability, u8::from(trace.probability >= 0.5)))
    }

    /// Exact analytic gradients of `bce_loss(probability, y)` with respect
    /// to every trainable parameter.
    pub fn backward(&self, trace: &ForwardTrace, y: u8) -> Result<Gradients> {
        let mut grads = Gradients::zeros_like(self);
        self.accumulate_gradients(trace, y, &mut grads)?;
        Ok(grads)
    }

    /// Adds this example's gradients into `grads` (used by mini-batch
    /// training to avoid per-example allocation).
    pub fn accumulate_gradients(
        &self,
        trace: &ForwardTrace,
        y: u8,
        grads: &mut Gradients,
    ) -> Result<()> {
        self.check_trace(trace)?;
        let valid = trace.valid;
        let dz = bce_logit_grad(trace.probability, y);

        let dpool_dropped = dense_backward(&trace.dense_input, &self.dense, dz, &mut grads.dense);
        let dpooled = match &trace.pooled_mask {
            Some(mask) => &dpool_dropped * mask,
            None => dpool_dropped,
        };

        let zero_vec =
            |dim: usize, n: usize| -> Vec<Array1<f64>> { (0..n).map(|_| Array1::zeros(dim)).collect() };

        let dxs0 = match self.arch {
            Architecture::StackedLstm { hidden1, hidden2 } => {
                let mut dh_ext_b = zero_vec(hidden2, valid);
                dh_ext_b[valid - 1] = dpooled;
                let xs_b = trace.xs_b.as_ref().expect("stacked trace retains layer-2 inputs");
                let dxs_b = layer_backward(
                    xs_b,
                    &trace.steps_b,
                    &dh_ext_b,
                    Direction::Forward,
                    &self.cells[1],
                    &mut grads.cells[1],
                );
                let dh1: Vec<Array1<f64>> = match &trace.mid_masks {
                    Some(masks) => dxs_b
                        .iter()
                        .zip(masks)
                        .map(|(d, m)| d * m)
                        .collect(),
                    None => dxs_b,
                };
                debug_assert_eq!(dh1.len(), valid);
                debug_assert_eq!(dh1[0].len(), hidden1);
                layer_backward(
                    &trace.xs0,
                    &trace.steps_a,
                    &dh1,
                    Direction::Forward,
                    &self.cells[0],
                    &mut grads.cells[0],
                )
            }
            Architecture::BiLstm { hidden } => {
                let mut dh_ext_a = zero_vec(hidden, valid);
                let mut dh_ext_b = zero_vec(hidden, valid);
                dh_ext_a[valid - 1] = dpooled.slice(ndarray::s![..hidden]).to_owned();
                dh_ext_b[0] = dpooled.slice(ndarray::s![hidden..]).to_owned();
                self.bidirectional_backward(trace, dh_ext_a, dh_ext_b, grads)
            }
            Architecture::BiLstmAttention { hidden, .. } => {
                let (states, attn) = trace.attention.as_ref().expect("attention trace present");
                let ds = attention_backward(
                    states,
                    valid,
                    self.attention.as_ref().expect("attention params present"),
                    attn,
                    &dpooled,
                    grads.attention.as_mut().expect("attention grads present"),
                );
                let mut dh_ext_a = zero_vec(hidden, valid);
                let mut dh_ext_b = zero_vec(hidden, valid);
                for t in 0..valid {
                    dh_ext_a[t] = ds[t].slice(ndarray::s![..hidden]).to_owned();
                    dh_ext_b[t] = ds[t].slice(ndarray::s![hidden..]).to_owned();
                }
                self.bidirectional_backward(trace, dh_ext_a, dh_ext_b, grads)
            }
        };

        if self.embedding.trainable {
            for (t, dx) in dxs0.iter().enumerate() {
                let id = trace.ids[t];
                debug_assert_ne!(id, PAD_INDEX, "valid positions never hold padding");
                grads.embedding.row_mut(id).scaled_add(1.0, dx);
            }
        }
        Ok(())
    }

    fn bidirectional_backward(
        &self,
        trace: &ForwardTrace,
        dh_ext_a: Vec<Array1<f64>>,
        dh_ext_b: Vec<Array1<f64>>,
        grads: &mut Gradients,
    ) -> Vec<Array1<f64>> {
        let dxs_a = layer_backward(
            &trace.xs0,
            &trace.steps_a,
            &dh_ext_a,
            Direction::Forward,
            &self.cells[0],
            &mut grads.cells[0],
        );
        let dxs_b = layer_backward(
            &trace.xs0,
            &trace.steps_b,
            &dh_ext_b,
            Direction::Backward,
            &self.cells[1],
            &mut grads.cells[1],
        );
        dxs_a
            .into_iter()
            .zip(dxs_b)
            .map(|(a, b)| a + b)
            .collect()
    }

    fn check_trace(&self, trace: &ForwardTrace) -> Result<()> {
        if trace.valid == 0 || trace.xs0.len() != trace.valid {
            return Err(Error::ShapeMismatch("trace has no valid positions".into()));
        }
        if trace.xs0[0].len() != self.embedding.dim() {
            return Err(Error::ShapeMismatch(format!(
                "trace embedding dim {} does not match model dim {}",
                trace.xs0[0].len(),
                self.embedding.dim()
            )));
        }
        if trace.dense_input.len() != self.dense.input_dim() {
            return Err(Error::ShapeMismatch(format!(
                "trace pooled dim {} does not match dense input {}",
                trace.dense_input.len(),
                self.dense.input_dim()
            )));
        }
        let expect_attention = matches!(self.arch, Architecture::BiLstmAttention { .. });
        if expect_attention != trace.attention.is_some() {
            return Err(Error::ShapeMismatch(
                "trace and model disagree about attention".into(),
            ));
        }
        Ok(())
    }

    /// Total number of scalar parameters, embedding included.
    pub fn n_params(&self) -> usize {
        self.flatten().len()
    }

    /// All parameters as one flat vector: embedding rows, then each cell's
    /// tensors, then attention, then the dense layer. The order matches
    /// `Gradients::flatten` and `assign_from_flat`.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        out.extend(self.embedding.rows.iter());
        for cell in &self.cells {
            flatten_cell(cell, &mut out);
        }
        if let Some(attn) = &self.attention {
            out.extend(attn.w.iter());
            out.extend(attn.v.iter());
        }
        out.extend(self.dense.w.iter());
        out.push(self.dense.b);
        out
    }

    pub fn assign_from_flat(&mut self, flat: &[f64]) {
        let mut cursor = Cursor { flat, pos: 0 };
        cursor.read_mat(&mut self.embedding.rows);
        for cell in &mut self.cells {
            read_cell(cell, &mut cursor);
        }
        if let Some(attn) = &mut self.attention {
            cursor.read_mat(&mut attn.w);
            cursor.read_vec(&mut attn.v);
        }
        cursor.read_vec(&mut self.dense.w);
        self.dense.b = cursor.read_scalar();
        assert_eq!(cursor.pos, flat.len(), "flat parameter length mismatch");
        // pad row stays zero
        self.embedding.rows.row_mut(PAD_INDEX).fill(0.0);
    }
}

/// Everything the backward pass needs from one forward pass.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub ids: Vec<usize>,
    pub valid: usize,
    xs0: Vec<Array1<f64>>,
    steps_a: Vec<GateTrace>,
    steps_b: Vec<GateTrace>,
    xs_b: Option<Vec<Array1<f64>>>,
    mid_masks: Option<Vec<Array1<f64>>>,
    attention: Option<(Vec<Array1<f64>>, AttentionTrace)>,
    pooled: Array1<f64>,
    pooled_mask: Option<Array1<f64>>,
    dense_input: Array1<f64>,
    pub logit: f64,
    pub probability: f64,
}

impl ForwardTrace {
    /// Attention weights per input position (exactly 0 at padding
    /// positions), when the architecture has attention.
    pub fn attention_weights(&self) -> Option<Vec<f64>> {
        self.attention.as_ref().map(|(_, attn)| {
            let mut weights = attn.weights.clone();
            weights.resize(self.ids.len(), 0.0);
            weights
        })
    }
}

/// Gradient set mirroring `ModelParams`.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub embedding: Array2<f64>,
    pub cells: Vec<LstmCellParams>,
    pub attention: Option<AttentionParams>,
    pub dense: DenseParams,
}

impl Gradients {
    pub fn zeros_like(params: &ModelParams) -> Self {
        Self {
            embedding: Array2::zeros(params.embedding.rows.dim()),
            cells: params
                .cells
                .iter()
                .map(|c| LstmCellParams::zeros(c.input_dim(), c.hidden_dim()))
                .collect(),
            attention: params
                .attention
                .as_ref()
                .map(|a| AttentionParams::zeros(a.attn_dim(), a.state_dim())),
            dense: DenseParams::zeros(params.dense.input_dim()),
        }
    }

    pub fn reset(&mut self) {
        self.embedding.fill(0.0);
        for cell in &mut self.cells {
            for t in cell.tensors_mut() {
                match t {
                    super::lstm::TensorMut::Mat(m) => m.fill(0.0),
                    super::lstm::TensorMut::Vec(v) => v.fill(0.0),
                }
            }
        }
        if let Some(attn) = &mut self.attention {
            attn.w.fill(0.0);
            attn.v.fill(0.0);
        }
        self.dense.w.fill(0.0);
        self.dense.b = 0.0;
    }

    pub fn scale(&mut self, factor: f64) {
        self.embedding.mapv_inplace(|v| v * factor);
        for cell in &mut self.cells {
            for t in cell.tensors_mut() {
                match t {
                    super::lstm::TensorMut::Mat(m) => m.mapv_inplace(|v| v * factor),
                    super::lstm::TensorMut::Vec(v) => v.mapv_inplace(|x| x * factor),
                }
            }
        }
        if let Some(attn) = &mut self.attention {
            attn.w.mapv_inplace(|v| v * factor);
            attn.v.mapv_inplace(|v| v * factor);
        }
        self.dense.w.mapv_inplace(|v| v * factor);
        self.dense.b *= factor;
    }

    /// Same order as `ModelParams::flatten`.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        out.extend(self.embedding.iter());
        for cell in &self.cells {
            flatten_cell(cell, &mut out);
        }
        if let Some(attn) = &self.attention {
            out.extend(attn.w.iter());
            out.extend(attn.v.iter());
        }
        out.extend(self.dense.w.iter());
        out.push(self.dense.b);
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.flatten().iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }
}

fn flatten_cell(cell: &LstmCellParams, out: &mut Vec<f64>) {
    for (_, t) in cell.tensors() {
        match t {
            super::lstm::TensorRef::Mat(m) => out.extend(m.iter()),
            super::lstm::TensorRef::Vec(v) => out.extend(v.iter()),
        }
    }
}

struct Cursor<'a> {
    flat: &'a [f64],
    pos: usize,
}

impl Cursor<'_> {
    fn read_mat(&mut self, m: &mut Array2<f64>) {
        let n = m.len();
        let slice = &self.flat[self.pos..self.pos + n];
        for (slot, &v) in m.iter_mut().zip(slice) {
            *slot = v;
        }
        self.pos += n;
    }

    fn read_vec(&mut self, v: &mut Array1<f64>) {
        let n = v.len();
        let slice = &self.flat[self.pos..self.pos + n];
        for (slot, &x) in v.iter_mut().zip(slice) {
            *slot = x;
        }
        self.pos += n;
    }

    fn read_scalar(&mut self) -> f64 {
        let v = self.flat[self.pos];
        self.pos += 1;
        v
    }
}

fn read_cell(cell: &mut LstmCellParams, cursor: &mut Cursor<'_>) {
    for t in cell.tensors_mut() {
        match t {
            super::lstm::TensorMut::Mat(m) => cursor.read_mat(m),
            super::lstm::TensorMut::Vec(v) => cursor.read_vec(v),
        }
    }
}
