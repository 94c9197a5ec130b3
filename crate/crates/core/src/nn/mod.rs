//! The numerical core: LSTM / BiLSTM / attention layers with exact forward
//! and backward passes, binary cross-entropy, dropout, and Adam.
//!
//! Everything runs in 64-bit floats; desk-scale model sizes make gradient
//! checks reliable and speed a non-issue.

mod adam;
mod attention;
mod dense;
mod dropout;
mod init;
mod loss;
mod lstm;
mod model;
mod train;

pub use adam::{AdamConfig, AdamState};
pub use attention::{attention_forward, AttentionParams, AttentionTrace};
pub use dense::{dense_sigmoid_forward, DenseParams};
pub use dropout::{dropout, Phase};
pub use loss::{bce_loss, BCE_EPS};
pub use lstm::{
    bilstm_forward, lstm_cell_forward, lstm_layer_forward, Direction, GateTrace, LstmCellParams,
};
pub(crate) use lstm::TensorRef;
pub use model::{Architecture, ForwardTrace, Gradients, ModelParams};
pub use train::{fit, predict, TrainConfig};

pub(crate) use crate::embeddings::EncodedSeq;
