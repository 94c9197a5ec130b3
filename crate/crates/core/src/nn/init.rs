use ndarray::Array2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Fills a matrix with Glorot-uniform values: U(-a, a), a = sqrt(6 / (fan_in + fan_out)).
pub(crate) fn glorot_uniform(w: &mut Array2<f64>, rng: &mut ChaCha8Rng) {
    let (rows, cols) = w.dim();
    let bound = (6.0 / (rows + cols) as f64).sqrt();
    for v in w.iter_mut() {
        *v = rng.random_range(-bound..bound);
    }
}
