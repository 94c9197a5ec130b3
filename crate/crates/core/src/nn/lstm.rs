//! LSTM cell and layer: exact forward pass with retained gate traces and
//! the matching backward pass.

use ndarray::{Array1, Array2};
use rand_chacha::ChaCha8Rng;

use crate::embeddings::EmbeddingMatrix;
use crate::error::{Error, Result};

use super::init::glorot_uniform;
use super::EncodedSeq;

/// Parameters of one LSTM cell: input projections `W_*` (hidden x input),
/// recurrent projections `U_*` (hidden x hidden) and biases `b_*` for the
/// input (i), forget (f), output (o) and candidate (g) gates.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmCellParams {
    pub w_i: Array2<f64>,
    pub w_f: Array2<f64>,
    pub w_o: Array2<f64>,
    pub w_g: Array2<f64>,
    pub u_i: Array2<f64>,
    pub u_f: Array2<f64>,
    pub u_o: Array2<f64>,
    pub u_g: Array2<f64>,
    pub b_i: Array1<f64>,
    pub b_f: Array1<f64>,
    pub b_o: Array1<f64>,
    pub b_g: Array1<f64>,
}

impl LstmCellParams {
    pub fn zeros(input_dim: usize, hidden_dim: usize) -> Self {
        let w = || Array2::zeros((hidden_dim, input_dim));
        let u = || Array2::zeros((hidden_dim, hidden_dim));
        let b = || Array1::zeros(hidden_dim);
        Self {
            w_i: w(),
            w_f: w(),
            w_o: w(),
            w_g: w(),
            u_i: u(),
            u_f: u(),
            u_o: u(),
            u_g: u(),
            b_i: b(),
            b_f: b(),
            b_o: b(),
            b_g: b(),
        }
    }

    /// Glorot-uniform projections, zero biases, forget bias 1.
    pub fn init(input_dim: usize, hidden_dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut p = Self::zeros(input_dim, hidden_dim);
        for w in [&mut p.w_i, &mut p.w_f, &mut p.w_o, &mut p.w_g] {
            glorot_uniform(w, rng);
        }
        for u in [&mut p.u_i, &mut p.u_f, &mut p.u_o, &mut p.u_g] {
            glorot_uniform(u, rng);
        }
        p.b_f.fill(1.0);
        p
    }

    pub fn input_dim(&self) -> usize {
        self.w_i.ncols()
    }

    pub fn hidden_dim(&self) -> usize {
        self.w_i.nrows()
    }

    pub(crate) fn tensors(&self) -> [(&'static str, TensorRef<'_>); 12] {
        [
            ("w_i", TensorRef::Mat(&self.w_i)),
            ("w_f", TensorRef::Mat(&self.w_f)),
            ("w_o", TensorRef::Mat(&self.w_o)),
            ("w_g", TensorRef::Mat(&self.w_g)),
            ("u_i", TensorRef::Mat(&self.u_i)),
            ("u_f", TensorRef::Mat(&self.u_f)),
            ("u_o", TensorRef::Mat(&self.u_o)),
            ("u_g", TensorRef::Mat(&self.u_g)),
            ("b_i", TensorRef::Vec(&self.b_i)),
            ("b_f", TensorRef::Vec(&self.b_f)),
            ("b_o", TensorRef::Vec(&self.b_o)),
            ("b_g", TensorRef::Vec(&self.b_g)),
        ]
    }

    pub(crate) fn tensors_mut(&mut self) -> [TensorMut<'_>; 12] {
        [
            TensorMut::Mat(&mut self.w_i),
            TensorMut::Mat(&mut self.w_f),
            TensorMut::Mat(&mut self.w_o),
            TensorMut::Mat(&mut self.w_g),
            TensorMut::Mat(&mut self.u_i),
            TensorMut::Mat(&mut self.u_f),
            TensorMut::Mat(&mut self.u_o),
            TensorMut::Mat(&mut self.u_g),
            TensorMut::Vec(&mut self.b_i),
            TensorMut::Vec(&mut self.b_f),
            TensorMut::Vec(&mut self.b_o),
            TensorMut::Vec(&mut self.b_g),
        ]
    }
}

pub(crate) enum TensorRef<'a> {
    Mat(&'a Array2<f64>),
    Vec(&'a Array1<f64>),
}

pub(crate) enum TensorMut<'a> {
    Mat(&'a mut Array2<f64>),
    Vec(&'a mut Array1<f64>),
}

/// All per-timestep activations of one cell application, retained for the
/// backward pass.
#[derive(Debug, Clone)]
pub struct GateTrace {
    pub i: Array1<f64>,
    pub f: Array1<f64>,
    pub o: Array1<f64>,
    pub g: Array1<f64>,
    pub c: Array1<f64>,
    pub tanh_c: Array1<f64>,
    pub h: Array1<f64>,
}

fn sigmoid_inplace(z: &mut Array1<f64>) {
    z.mapv_inplace(|v| 1.0 / (1.0 + (-v).exp()));
}

fn gate(w: &Array2<f64>, u: &Array2<f64>, b: &Array1<f64>, x: &Array1<f64>, h: &Array1<f64>) -> Array1<f64> {
    let mut z = w.dot(x);
    z += &u.dot(h);
    z += b;
    z
}

/// One LSTM step:
/// i = sigma(W_i x + U_i h + b_i), f, o analogous, g = tanh(W_g x + U_g h + b_g),
/// c_t = f * c_prev + i * g, h_t = o * tanh(c_t).
pub fn lstm_cell_forward(
    x: &Array1<f64>,
    h_prev: &Array1<f64>,
    c_prev: &Array1<f64>,
    p: &LstmCellParams,
) -> Result<GateTrace> {
    if x.len() != p.input_dim() || h_prev.len() != p.hidden_dim() || c_prev.len() != p.hidden_dim() {
        return Err(Error::ShapeMismatch(format!(
            "lstm cell expects input {} / hidden {}, got x {} / h {} / c {}",
            p.input_dim(),
            p.hidden_dim(),
            x.len(),
            h_prev.len(),
            c_prev.len()
        )));
    }
    let mut i = gate(&p.w_i, &p.u_i, &p.b_i, x, h_prev);
    sigmoid_inplace(&mut i);
    let mut f = gate(&p.w_f, &p.u_f, &p.b_f, x, h_prev);
    sigmoid_inplace(&mut f);
    let mut o = gate(&p.w_o, &p.u_o, &p.b_o, x, h_prev);
    sigmoid_inplace(&mut o);
    let mut g = gate(&p.w_g, &p.u_g, &p.b_g, x, h_prev);
    g.mapv_inplace(f64::tanh);

    let c = &f * c_prev + &i * &g;
    let tanh_c = c.mapv(f64::tanh);
    let h = &o * &tanh_c;
    Ok(GateTrace {
        i,
        f,
        o,
        g,
        c,
        tanh_c,
        h,
    })
}

/// Iteration direction over the valid prefix of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Runs a cell over `xs`, producing one trace per position. Position `t`
/// of the result always refers to input position `t`; for
/// `Direction::Backward` the recurrence runs from the last position to the
/// first.
pub(crate) fn run_layer(
    xs: &[Array1<f64>],
    p: &LstmCellParams,
    direction: Direction,
) -> Result<Vec<GateTrace>> {
    if xs.is_empty() {
        return Err(Error::EmptySequence);
    }
    let n = xs.len();
    let hidden = p.hidden_dim();
    let mut steps: Vec<Option<GateTrace>> = (0..n).map(|_| None).collect();
    let mut h = Array1::zeros(hidden);
    let mut c = Array1::zeros(hidden);
    let order: Vec<usize> = match direction {
        Direction::Forward => (0..n).collect(),
        Direction::Backward => (0..n).rev().collect(),
    };
    for &t in &order {
        let trace = lstm_cell_forward(&xs[t], &h, &c, p)?;
        h = trace.h.clone();
        c = trace.c.clone();
        steps[t] = Some(trace);
    }
    Ok(steps.into_iter().map(|s| s.expect("all positions visited")).collect())
}

/// `acc += dz (outer) x`
fn outer_acc(acc: &mut Array2<f64>, dz: &Array1<f64>, x: &Array1<f64>) {
    for (r, &scale) in dz.iter().enumerate() {
        if scale != 0.0 {
            acc.row_mut(r).scaled_add(scale, x);
        }
    }
}

/// `acc += m^T dz`
fn mat_t_vec_acc(acc: &mut Array1<f64>, m: &Array2<f64>, dz: &Array1<f64>) {
    for (r, &scale) in dz.iter().enumerate() {
        if scale != 0.0 {
            acc.scaled_add(scale, &m.row(r));
        }
    }
}

/// Backward pass for one cell step. `dh` is the total gradient on `h_t`,
/// `dc_in` the cell-state gradient flowing back from the following step.
/// Parameter gradients accumulate into `grads`; returns
/// `(dx, dh_prev, dc_prev)`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn lstm_cell_backward(
    x: &Array1<f64>,
    h_prev: &Array1<f64>,
    c_prev: &Array1<f64>,
    trace: &GateTrace,
    dh: &Array1<f64>,
    dc_in: &Array1<f64>,
    p: &LstmCellParams,
    grads: &mut LstmCellParams,
) -> (Array1<f64>, Array1<f64>, Array1<f64>) {
    let d_o = dh * &trace.tanh_c;
    let mut dc = dc_in.clone();
    dc += &(dh * &trace.o * &trace.tanh_c.mapv(|v| 1.0 - v * v));

    let d_f = &dc * c_prev;
    let d_i = &dc * &trace.g;
    let d_g = &dc * &trace.i;
    let dc_prev = &dc * &trace.f;

    let dz_i = &d_i * &trace.i * &trace.i.mapv(|v| 1.0 - v);
    let dz_f = &d_f * &trace.f * &trace.f.mapv(|v| 1.0 - v);
    let dz_o = &d_o * &trace.o * &trace.o.mapv(|v| 1.0 - v);
    let dz_g = &d_g * &trace.g.mapv(|v| 1.0 - v * v);

    outer_acc(&mut grads.w_i, &dz_i, x);
    outer_acc(&mut grads.w_f, &dz_f, x);
    outer_acc(&mut grads.w_o, &dz_o, x);
    outer_acc(&mut grads.w_g, &dz_g, x);
    outer_acc(&mut grads.u_i, &dz_i, h_prev);
    outer_acc(&mut grads.u_f, &dz_f, h_prev);
    outer_acc(&mut grads.u_o, &dz_o, h_prev);
    outer_acc(&mut grads.u_g, &dz_g, h_prev);
    grads.b_i += &dz_i;
    grads.b_f += &dz_f;
    grads.b_o += &dz_o;
    grads.b_g += &dz_g;

    let mut dx = Array1::zeros(x.len());
    mat_t_vec_acc(&mut dx, &p.w_i, &dz_i);
    mat_t_vec_acc(&mut dx, &p.w_f, &dz_f);
    mat_t_vec_acc(&mut dx, &p.w_o, &dz_o);
    mat_t_vec_acc(&mut dx, &p.w_g, &dz_g);

    let mut dh_prev = Array1::zeros(h_prev.len());
    mat_t_vec_acc(&mut dh_prev, &p.u_i, &dz_i);
    mat_t_vec_acc(&mut dh_prev, &p.u_f, &dz_f);
    mat_t_vec_acc(&mut dh_prev, &p.u_o, &dz_o);
    mat_t_vec_acc(&mut dh_prev, &p.u_g, &dz_g);

    (dx, dh_prev, dc_prev)
}

/// Backpropagates through a layer run. `dh_ext[t]` is the external gradient
/// on the hidden state at position `t`. Returns `dxs` per position.
pub(crate) fn layer_backward(
    xs: &[Array1<f64>],
    steps: &[GateTrace],
    dh_ext: &[Array1<f64>],
    direction: Direction,
    p: &LstmCellParams,
    grads: &mut LstmCellParams,
) -> Vec<Array1<f64>> {
    let n = xs.len();
    let hidden = p.hidden_dim();
    let mut dxs: Vec<Array1<f64>> = xs.iter().map(|x| Array1::zeros(x.len())).collect();
    let mut dh_carry = Array1::zeros(hidden);
    let mut dc_carry = Array1::zeros(hidden);

    // reverse of the processing order
    let order: Vec<usize> = match direction {
        Direction::Forward => (0..n).rev().collect(),
        Direction::Backward => (0..n).collect(),
    };
    let zero = Array1::zeros(hidden);
    for &t in &order {
        let dh = &dh_ext[t] + &dh_carry;
        let (h_prev, c_prev) = match direction {
            Direction::Forward if t > 0 => (&steps[t - 1].h, &steps[t - 1].c),
            Direction::Backward if t + 1 < n => (&steps[t + 1].h, &steps[t + 1].c),
            _ => (&zero, &zero),
        };
        let (dx, dhp, dcp) =
            lstm_cell_backward(&xs[t], h_prev, c_prev, &steps[t], &dh, &dc_carry, p, grads);
        dxs[t] = dx;
        dh_carry = dhp;
        dc_carry = dcp;
    }
    dxs
}

/// Hidden-state sequence of one LSTM layer over the valid prefix of an
/// encoded sequence. Padding positions are excluded; the backward
/// direction reads the valid prefix reversed.
pub fn lstm_layer_forward(
    seq: &EncodedSeq,
    emb: &EmbeddingMatrix,
    p: &LstmCellParams,
    direction: Direction,
) -> Result<Vec<Array1<f64>>> {
    if seq.valid == 0 {
        return Err(Error::EmptySequence);
    }
    let xs = seq.embed(emb);
    let steps = run_layer(&xs, p, direction)?;
    Ok(steps.into_iter().map(|s| s.h).collect())
}

/// Per-position concatenation `[h_fwd_t ; h_bwd_t]` of the two directions.
pub fn bilstm_forward(
    seq: &EncodedSeq,
    emb: &EmbeddingMatrix,
    p_fwd: &LstmCellParams,
    p_bwd: &LstmCellParams,
) -> Result<Vec<Array1<f64>>> {
    let fwd = lstm_layer_forward(seq, emb, p_fwd, Direction::Forward)?;
    let bwd = lstm_layer_forward(seq, emb, p_bwd, Direction::Backward)?;
    Ok(fwd
        .into_iter()
        .zip(bwd)
        .map(|(f, b)| concat(&f, &b))
        .collect())
}

pub(crate) fn concat(a: &Array1<f64>, b: &Array1<f64>) -> Array1<f64> {
    let mut out = Array1::zeros(a.len() + b.len());
    out.slice_mut(ndarray::s![..a.len()]).assign(a);
    out.slice_mut(ndarray::s![a.len()..]).assign(b);
    out
}
