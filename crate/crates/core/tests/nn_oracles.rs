//! Oracle checks for the numerical core: an independent scalar
//! re-implementation of the cell formulas, hand-computed attention
//! weights, and layer composition against chained cell applications.

use ndarray::{arr1, Array1};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wsdetect_core::embeddings::{build_matrix, encode, EmbeddingMode};
use wsdetect_core::nn::{
    attention_forward, bilstm_forward, dense_sigmoid_forward, lstm_cell_forward,
    lstm_layer_forward, AttentionParams, DenseParams, Direction, LstmCellParams,
};

mod util;
use util::tiny_setup;

/// Independent scalar evaluation of the five cell formulas, written with
/// plain loops so it shares nothing with the implementation path.
fn oracle_cell(
    x: &[f64],
    h_prev: &[f64],
    c_prev: &[f64],
    p: &LstmCellParams,
) -> (Vec<f64>, Vec<f64>) {
    let hidden = p.hidden_dim();
    let input = p.input_dim();
    let sig = |z: f64| 1.0 / (1.0 + (-z).exp());
    let project = |w: &ndarray::Array2<f64>, u: &ndarray::Array2<f64>, b: &Array1<f64>| {
        let mut out = vec![0.0; hidden];
        for r in 0..hidden {
            let mut z = b[r];
            for c in 0..input {
                z += w[[r, c]] * x[c];
            }
            for c in 0..hidden {
                z += u[[r, c]] * h_prev[c];
            }
            out[r] = z;
        }
        out
    };
    let zi = project(&p.w_i, &p.u_i, &p.b_i);
    let zf = project(&p.w_f, &p.u_f, &p.b_f);
    let zo = project(&p.w_o, &p.u_o, &p.b_o);
    let zg = project(&p.w_g, &p.u_g, &p.b_g);
    let mut c_t = vec![0.0; hidden];
    let mut h_t = vec![0.0; hidden];
    for r in 0..hidden {
        let i = sig(zi[r]);
        let f = sig(zf[r]);
        let o = sig(zo[r]);
        let g = zg[r].tanh();
        c_t[r] = f * c_prev[r] + i * g;
        h_t[r] = o * c_t[r].tanh();
    }
    (h_t, c_t)
}

fn random_cell(input: usize, hidden: usize, seed: u64) -> LstmCellParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    LstmCellParams::init(input, hidden, &mut rng)
}

fn random_vec(n: usize, rng: &mut ChaCha8Rng) -> Array1<f64> {
    Array1::from_iter((0..n).map(|_| rng.random_range(-1.0..1.0)))
}

#[test]
fn zero_parameters_give_zero_state() {
    // all gates sigmoid(0) = 0.5, candidate tanh(0) = 0
    let p = LstmCellParams::zeros(3, 2);
    let x = arr1(&[0.7, -0.3, 0.1]);
    let h = Array1::zeros(2);
    let c = Array1::zeros(2);
    let t = lstm_cell_forward(&x, &h, &c, &p).unwrap();
    assert!(t.i.iter().all(|&v| (v - 0.5).abs() < 1e-15));
    assert!(t.c.iter().all(|&v| v == 0.0));
    assert!(t.h.iter().all(|&v| v == 0.0));
}

#[test]
fn saturated_gates_preserve_cell_state() {
    // large biases push i, f, o to ~1 while g stays 0, so c carries over
    let mut p = LstmCellParams::zeros(2, 2);
    p.b_i.fill(50.0);
    p.b_f.fill(50.0);
    p.b_o.fill(50.0);
    let x = arr1(&[0.0, 0.0]);
    let h = Array1::zeros(2);
    let c = arr1(&[1.0, 1.0]);
    let t = lstm_cell_forward(&x, &h, &c, &p).unwrap();
    for r in 0..2 {
        assert!((t.c[r] - 1.0).abs() < 1e-9);
        assert!((t.h[r] - 1.0f64.tanh()).abs() < 1e-9, "h = {}", t.h[r]);
    }
    assert!((1.0f64.tanh() - 0.7616).abs() < 1e-4);
}

#[test]
fn cell_matches_independent_oracle() {
    let p = random_cell(2, 3, 7);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let x = random_vec(2, &mut rng);
        let h = random_vec(3, &mut rng);
        let c = random_vec(3, &mut rng);
        let t = lstm_cell_forward(&x, &h, &c, &p).unwrap();
        let (oh, oc) = oracle_cell(
            x.as_slice().unwrap(),
            h.as_slice().unwrap(),
            c.as_slice().unwrap(),
            &p,
        );
        for r in 0..3 {
            assert!((t.h[r] - oh[r]).abs() < 1e-12);
            assert!((t.c[r] - oc[r]).abs() < 1e-12);
        }
    }
}

#[test]
fn cell_rejects_dimension_mismatch() {
    let p = LstmCellParams::zeros(3, 2);
    let bad_x = arr1(&[1.0, 2.0]);
    let h = Array1::zeros(2);
    let c = Array1::zeros(2);
    assert!(lstm_cell_forward(&bad_x, &h, &c, &p).is_err());
}

#[test]
fn layer_of_length_one_is_direction_independent() {
    let (vocab, _) = tiny_setup(3);
    let matrix = build_matrix(&vocab, None, 3, EmbeddingMode::Random, 5).unwrap();
    let p = random_cell(3, 2, 1);
    let seq = encode(&["alpha".to_string()], &vocab, 4);
    let fwd = lstm_layer_forward(&seq, &matrix, &p, Direction::Forward).unwrap();
    let bwd = lstm_layer_forward(&seq, &matrix, &p, Direction::Backward).unwrap();
    assert_eq!(fwd.len(), 1);
    assert_eq!(fwd[0], bwd[0]);
}

#[test]
fn palindrome_gives_mirrored_hidden_sequences() {
    let (vocab, _) = tiny_setup(3);
    let matrix = build_matrix(&vocab, None, 3, EmbeddingMode::Random, 5).unwrap();
    let p = random_cell(3, 2, 2);
    let words: Vec<String> = ["alpha", "beta", "alpha"].iter().map(|s| s.to_string()).collect();
    let seq = encode(&words, &vocab, 6);
    let fwd = lstm_layer_forward(&seq, &matrix, &p, Direction::Forward).unwrap();
    let bwd = lstm_layer_forward(&seq, &matrix, &p, Direction::Backward).unwrap();
    for (f, b) in fwd.iter().zip(bwd.iter().rev()) {
        let diff = f - b;
        assert!(diff.iter().all(|&v| v.abs() < 1e-12));
    }
}

#[test]
fn layer_equals_chained_cell_oracle() {
    let (vocab, _) = tiny_setup(3);
    let matrix = build_matrix(&vocab, None, 3, EmbeddingMode::Random, 9).unwrap();
    let p = random_cell(3, 2, 3);
    let words: Vec<String> = ["alpha", "beta", "gamma"].iter().map(|s| s.to_string()).collect();
    let seq = encode(&words, &vocab, 5);
    let states = lstm_layer_forward(&seq, &matrix, &p, Direction::Forward).unwrap();

    let mut h = vec![0.0; 2];
    let mut c = vec![0.0; 2];
    for (t, state) in states.iter().enumerate() {
        let x: Vec<f64> = matrix.row(seq.ids[t]).to_vec();
        let (nh, nc) = oracle_cell(&x, &h, &c, &p);
        for r in 0..2 {
            assert!((state[r] - nh[r]).abs() < 1e-12);
        }
        h = nh;
        c = nc;
    }
}

#[test]
fn empty_sequence_is_rejected() {
    let (vocab, _) = tiny_setup(3);
    let matrix = build_matrix(&vocab, None, 3, EmbeddingMode::Random, 5).unwrap();
    let p = random_cell(3, 2, 1);
    let seq = encode(&[], &vocab, 4);
    assert!(lstm_layer_forward(&seq, &matrix, &p, Direction::Forward).is_err());
}

#[test]
fn bilstm_zero_backward_params_zero_out_second_half() {
    let (vocab, _) = tiny_setup(3);
    let matrix = build_matrix(&vocab, None, 3, EmbeddingMode::Random, 5).unwrap();
    let p_fwd = random_cell(3, 2, 4);
    let p_bwd = LstmCellParams::zeros(3, 2);
    let words: Vec<String> = ["alpha", "beta"].iter().map(|s| s.to_string()).collect();
    let seq = encode(&words, &vocab, 4);
    let states = bilstm_forward(&seq, &matrix, &p_fwd, &p_bwd).unwrap();
    assert_eq!(states[0].len(), 4); // hidden 2 per direction
    for s in &states {
        assert!(s.slice(ndarray::s![2..]).iter().all(|&v| v == 0.0));
    }
}

#[test]
fn bilstm_matches_concatenated_oracle() {
    let (vocab, _) = tiny_setup(3);
    let matrix = build_matrix(&vocab, None, 3, EmbeddingMode::Random, 6).unwrap();
    let p_fwd = random_cell(3, 2, 5);
    let p_bwd = random_cell(3, 2, 6);
    let words: Vec<String> = ["alpha", "beta"].iter().map(|s| s.to_string()).collect();
    let seq = encode(&words, &vocab, 4);
    let states = bilstm_forward(&seq, &matrix, &p_fwd, &p_bwd).unwrap();

    let xs: Vec<Vec<f64>> = (0..2).map(|t| matrix.row(seq.ids[t]).to_vec()).collect();
    // forward chain
    let (h0, c0) = oracle_cell(&xs[0], &[0.0; 2], &[0.0; 2], &p_fwd);
    let (h1, _) = oracle_cell(&xs[1], &h0, &c0, &p_fwd);
    // backward chain reads position 1 first
    let (b1, bc1) = oracle_cell(&xs[1], &[0.0; 2], &[0.0; 2], &p_bwd);
    let (b0, _) = oracle_cell(&xs[0], &b1, &bc1, &p_bwd);

    let expect = [(h0, b0), (h1, b1)];
    for (t, (hf, hb)) in expect.iter().enumerate() {
        for r in 0..2 {
            assert!((states[t][r] - hf[r]).abs() < 1e-12);
            assert!((states[t][2 + r] - hb[r]).abs() < 1e-12);
        }
    }
}

#[test]
fn equal_states_get_uniform_attention() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = AttentionParams::init(3, 4, &mut rng);
    let s = random_vec(4, &mut rng);
    let states = vec![s.clone(), s.clone(), s];
    let trace = attention_forward(&states, 3, &p).unwrap();
    for &w in &trace.weights {
        assert!((w - 1.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn constructed_scores_give_one_third_two_thirds() {
    // states are scalars; W = [[1]], v = [1] gives score_t = tanh(s_t).
    // s_0 = 0 scores 0; s_1 = artanh(ln 2) scores ln 2, so the softmax
    // weights are exactly (1/3, 2/3).
    let p = AttentionParams {
        w: ndarray::arr2(&[[1.0]]),
        v: arr1(&[1.0]),
    };
    let ln2 = std::f64::consts::LN_2;
    let artanh = |y: f64| 0.5 * ((1.0 + y) / (1.0 - y)).ln();
    let states = vec![arr1(&[0.0]), arr1(&[artanh(ln2)])];
    let trace = attention_forward(&states, 2, &p).unwrap();
    assert!((trace.weights[0] - 1.0 / 3.0).abs() < 1e-12);
    assert!((trace.weights[1] - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn single_valid_state_takes_all_attention() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let p = AttentionParams::init(2, 3, &mut rng);
    let s0 = random_vec(3, &mut rng);
    let pad = Array1::zeros(3);
    let states = vec![s0.clone(), pad.clone(), pad];
    let trace = attention_forward(&states, 1, &p).unwrap();
    assert_eq!(trace.weights, vec![1.0, 0.0, 0.0]);
    assert_eq!(trace.context, s0);
}

#[test]
fn attention_weights_sum_to_one_with_zero_padding() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for trial in 0..50 {
        let state_dim = 1 + (trial % 4);
        let p = AttentionParams::init(2, state_dim, &mut rng);
        let n = 1 + (trial % 5);
        let valid = 1 + (trial % n.max(1));
        let states: Vec<_> = (0..n).map(|_| random_vec(state_dim, &mut rng)).collect();
        let trace = attention_forward(&states, valid, &p).unwrap();
        let total: f64 = trace.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-6);
        assert!(trace.weights.iter().all(|&w| w >= 0.0));
        for &w in &trace.weights[valid..] {
            assert_eq!(w, 0.0);
        }
    }
}

#[test]
fn dense_zero_params_give_half() {
    let p = DenseParams::zeros(4);
    let x = arr1(&[1.0, -2.0, 3.0, 0.5]);
    let (_, prob) = dense_sigmoid_forward(&x, &p).unwrap();
    assert_eq!(prob, 0.5);
}

#[test]
fn dense_large_bias_saturates() {
    let mut p = DenseParams::zeros(2);
    p.b = 50.0;
    let (_, prob) = dense_sigmoid_forward(&arr1(&[0.0, 0.0]), &p).unwrap();
    assert!((prob - 1.0).abs() < 1e-9);
}

#[test]
fn dense_matches_dot_product_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let w = random_vec(4, &mut rng);
    let x = random_vec(4, &mut rng);
    let b = 0.3;
    let p = DenseParams { w: w.clone(), b };
    let (logit, prob) = dense_sigmoid_forward(&x, &p).unwrap();
    let mut z = b;
    for r in 0..4 {
        z += w[r] * x[r];
    }
    assert!((logit - z).abs() < 1e-15);
    assert!((prob - 1.0 / (1.0 + (-z).exp())).abs() < 1e-15);
}
