//! Fixed-family multilayer perceptron: `d_in - h_1 - ... - h_L - K`.
//!
//! Every hidden layer is `dense -> batch norm -> ELU`. The output layer is a plain dense
//! layer emitting raw logits, followed by a row-wise softmax. Gradients are derived by hand
//! for exactly this family, including the full batch-statistics path of batch norm.
//!
//! Dense weights are stored `fan_in x fan_out` so a batch `X` (rows are examples) maps to
//! `X W + b`.
//!
//! Trainable tensors are always visited in the same order: for each hidden layer the
//! weight, bias, batch-norm scale and batch-norm shift; then the output weight and bias.
//! The optimizer state, the gradient container and the complexity proxy all rely on it.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::matrix::{argmax_rows, gemm, Matrix};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub input_dim: usize,
    pub hidden_dims: Vec<usize>,
    pub output_dim: usize,
    pub elu_alpha: f64,
    pub bn_epsilon: f64,
    pub bn_momentum: f64,
}

impl ModelSpec {
    /// `input_dim - 512 - 256 - output_dim` with ELU(1.0), batch-norm epsilon 1e-5 and
    /// momentum 0.1.
    pub fn new(input_dim: usize, output_dim: usize) -> Self {
        Self {
            input_dim,
            hidden_dims: vec![512, 256],
            output_dim,
            elu_alpha: 1.0,
            bn_epsilon: 1e-5,
            bn_momentum: 0.1,
        }
    }

    pub fn with_hidden(mut self, hidden_dims: Vec<usize>) -> Self {
        self.hidden_dims = hidden_dims;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 || self.output_dim == 0 {
            return Err(Error::config("input and output dims must be >= 1"));
        }
        if self.hidden_dims.is_empty() {
            return Err(Error::config("at least one hidden layer is required"));
        }
        if self.hidden_dims.contains(&0) {
            return Err(Error::config("hidden dims must be >= 1"));
        }
        if !(self.elu_alpha > 0.0 && self.elu_alpha.is_finite()) {
            return Err(Error::config("elu_alpha must be positive"));
        }
        if !(self.bn_epsilon > 0.0 && self.bn_epsilon.is_finite()) {
            return Err(Error::config("bn_epsilon must be positive"));
        }
        if !(self.bn_momentum > 0.0 && self.bn_momentum < 1.0) {
            return Err(Error::config("bn_momentum must lie in (0, 1)"));
        }
        Ok(())
    }

    /// `[input, hidden..., output]`.
    pub fn layer_dims(&self) -> Vec<usize> {
        let mut dims = Vec::with_capacity(self.hidden_dims.len() + 2);
        dims.push(self.input_dim);
        dims.extend_from_slice(&self.hidden_dims);
        dims.push(self.output_dim);
        dims
    }

    /// Number of trainable scalars: dense weights and biases plus batch-norm scale and
    /// shift. Running statistics are not counted.
    pub fn parameter_count(&self) -> usize {
        let dims = self.layer_dims();
        let dense: usize = dims.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
        let bn: usize = self.hidden_dims.iter().map(|h| 2 * h).sum();
        dense + bn
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Training,
    Inference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    /// `fan_in x fan_out`.
    pub weight: Matrix,
    pub bias: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchNorm {
    pub scale: Vec<f64>,
    pub shift: Vec<f64>,
    pub running_mean: Vec<f64>,
    pub running_var: Vec<f64>,
}

impl BatchNorm {
    fn new(width: usize) -> Self {
        Self {
            scale: vec![1.0; width],
            shift: vec![0.0; width],
            running_mean: vec![0.0; width],
            running_var: vec![1.0; width],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub spec: ModelSpec,
    /// Hidden layers first, output layer last.
    pub dense: Vec<Dense>,
    /// One per hidden layer.
    pub norms: Vec<BatchNorm>,
    pub mode: Mode,
}

/// Uniform fan-in scaled initialization: every dense weight is drawn from
/// `U(-sqrt(3 / fan_in), sqrt(3 / fan_in))` (variance `1 / fan_in`), biases are zero,
/// batch norm starts at scale 1, shift 0, running mean 0 and running variance 1.
///
/// The draws come from the `(seed, "init", 0)` stream in tensor order, so equal seeds give
/// bit-identical parameters. The model starts in training mode.
pub fn init_model(spec: &ModelSpec, seed: u64) -> Result<ModelParams> {
    init_model_scaled(spec, seed, 1.0)
}

/// [`init_model`] with every weight limit multiplied by `gain > 0`. The same stream is used,
/// so the result is exactly `gain` times the unit-gain weights up to rounding.
pub fn init_model_scaled(spec: &ModelSpec, seed: u64, gain: f64) -> Result<ModelParams> {
    spec.validate()?;
    if !(gain > 0.0 && gain.is_finite()) {
        return Err(Error::config("init gain must be finite and > 0"));
    }
    let mut rng = rng::stream(seed, "init", 0);
    let dims = spec.layer_dims();
    let dense = dims
        .windows(2)
        .map(|w| {
            let (fan_in, fan_out) = (w[0], w[1]);
            let limit = gain * libm::sqrt(3.0 / fan_in as f64);
            let data = (0..fan_in * fan_out)
                .map(|_| rng.random_range(-limit..limit))
                .collect();
            Dense {
                weight: Matrix::from_vec(fan_in, fan_out, data).expect("sized above"),
                bias: vec![0.0; fan_out],
            }
        })
        .collect();
    let norms = spec.hidden_dims.iter().map(|&h| BatchNorm::new(h)).collect();
    Ok(ModelParams { spec: spec.clone(), dense, norms, mode: Mode::Training })
}

/// Visits trainable tensors in the crate-wide canonical order.
pub trait Parameters {
    fn tensors(&self) -> Vec<&[f64]>;
    fn tensors_mut(&mut self) -> Vec<&mut [f64]>;

    fn scalar_count(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }
}

impl Parameters for ModelParams {
    fn tensors(&self) -> Vec<&[f64]> {
        let mut out = Vec::with_capacity(4 * self.dense.len());
        for (d, n) in self.dense.iter().zip(&self.norms) {
            out.push(d.weight.as_slice());
            out.push(&d.bias[..]);
            out.push(&n.scale[..]);
            out.push(&n.shift[..]);
        }
        let last = self.dense.last().expect("at least one dense layer");
        out.push(last.weight.as_slice());
        out.push(&last.bias[..]);
        out
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        let layers = self.dense.len();
        let mut out = Vec::with_capacity(4 * layers);
        let (hidden, last) = self.dense.split_at_mut(layers - 1);
        for (d, n) in hidden.iter_mut().zip(self.norms.iter_mut()) {
            out.push(d.weight.as_mut_slice());
            out.push(&mut d.bias[..]);
            out.push(&mut n.scale[..]);
            out.push(&mut n.shift[..]);
        }
        out.push(last[0].weight.as_mut_slice());
        out.push(&mut last[0].bias[..]);
        out
    }
}

impl Parameters for Vec<Vec<f64>> {
    fn tensors(&self) -> Vec<&[f64]> {
        self.iter().map(|t| &t[..]).collect()
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        self.iter_mut().map(|t| &mut t[..]).collect()
    }
}

/// Gradients with the same layout as [`ModelParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Matrix>,
    pub biases: Vec<Vec<f64>>,
    pub bn_scale: Vec<Vec<f64>>,
    pub bn_shift: Vec<Vec<f64>>,
}

impl Gradients {
    pub fn zeros_like(params: &ModelParams) -> Self {
        Self {
            weights: params
                .dense
                .iter()
                .map(|d| Matrix::zeros(d.weight.rows(), d.weight.cols()))
                .collect(),
            biases: params.dense.iter().map(|d| vec![0.0; d.bias.len()]).collect(),
            bn_scale: params.norms.iter().map(|n| vec![0.0; n.scale.len()]).collect(),
            bn_shift: params.norms.iter().map(|n| vec![0.0; n.shift.len()]).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.iter().all(|v| v.is_finite()))
    }
}

impl Parameters for Gradients {
    fn tensors(&self) -> Vec<&[f64]> {
        let hidden = self.bn_scale.len();
        let mut out = Vec::with_capacity(4 * self.weights.len());
        for l in 0..hidden {
            out.push(self.weights[l].as_slice());
            out.push(&self.biases[l][..]);
            out.push(&self.bn_scale[l][..]);
            out.push(&self.bn_shift[l][..]);
        }
        out.push(self.weights[hidden].as_slice());
        out.push(&self.biases[hidden][..]);
        out
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        let mut out = Vec::with_capacity(4 * self.weights.len());
        let (w_hidden, w_last) = self.weights.split_at_mut(self.bn_scale.len());
        let (b_hidden, b_last) = self.biases.split_at_mut(self.bn_scale.len());
        for (((w, b), s), t) in w_hidden
            .iter_mut()
            .zip(b_hidden.iter_mut())
            .zip(self.bn_scale.iter_mut())
            .zip(self.bn_shift.iter_mut())
        {
            out.push(w.as_mut_slice());
            out.push(&mut b[..]);
            out.push(&mut s[..]);
            out.push(&mut t[..]);
        }
        out.push(w_last[0].as_mut_slice());
        out.push(&mut b_last[0][..]);
        out
    }
}

/// Intermediates of one hidden layer during a training-mode forward pass.
#[derive(Debug, Clone)]
struct HiddenCache {
    input: Matrix,
    normalized: Matrix,
    inv_std: Vec<f64>,
    /// Batch-norm output, i.e. the ELU input.
    pre_activation: Matrix,
}

/// Everything [`ModelParams::backward`] needs from a training-mode forward pass.
#[derive(Debug, Clone)]
pub struct Cache {
    hidden: Vec<HiddenCache>,
    last_hidden: Matrix,
    batch_size: usize,
}

#[derive(Debug, Clone)]
pub struct Forward {
    pub logits: Matrix,
    pub probs: Matrix,
    /// Present only for training-mode passes.
    pub cache: Option<Cache>,
}

#[inline]
fn elu(z: f64, alpha: f64) -> f64 {
    if z > 0.0 {
        z
    } else {
        alpha * libm::expm1(z)
    }
}

#[inline]
fn elu_grad(z: f64, alpha: f64) -> f64 {
    if z > 0.0 {
        1.0
    } else {
        alpha * libm::exp(z)
    }
}

/// Row-wise softmax with max subtraction.
pub fn softmax_rows(logits: &Matrix) -> Matrix {
    let mut probs = logits.clone();
    for r in 0..probs.rows() {
        let row = probs.row_mut(r);
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for v in row.iter_mut() {
            *v = libm::exp(*v - max);
            sum += *v;
        }
        row.iter_mut().for_each(|v| *v /= sum);
    }
    probs
}

fn affine(input: &Matrix, layer: &Dense) -> Matrix {
    let mut z = Matrix::zeros(input.rows(), layer.weight.cols());
    for r in 0..z.rows() {
        z.row_mut(r).copy_from_slice(&layer.bias);
    }
    gemm(input, false, &layer.weight, false, 1.0, &mut z);
    z
}

fn check_finite(m: &Matrix, what: impl FnOnce() -> alloc::string::String) -> Result<()> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(Error::NumericFailure(what()))
    }
}

impl ModelParams {
    pub fn hidden_layers(&self) -> usize {
        self.norms.len()
    }

    pub fn set_mode(&mut self, mode: Mode) {
        self.mode = mode;
    }

    /// Checks that tensor shapes agree with the spec and running variances are `>= 0`.
    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        let dims = self.spec.layer_dims();
        if self.dense.len() != dims.len() - 1 || self.norms.len() != self.spec.hidden_dims.len() {
            return Err(Error::shape("layer count does not match spec"));
        }
        for (l, (d, w)) in self.dense.iter().zip(dims.windows(2)).enumerate() {
            if d.weight.rows() != w[0] || d.weight.cols() != w[1] || d.bias.len() != w[1] {
                return Err(Error::shape(format!("dense layer {l} does not match spec")));
            }
        }
        for (l, (n, &h)) in self.norms.iter().zip(&self.spec.hidden_dims).enumerate() {
            if [&n.scale, &n.shift, &n.running_mean, &n.running_var].iter().any(|v| v.len() != h) {
                return Err(Error::shape(format!("batch norm {l} does not match spec")));
            }
            if n.running_var.iter().any(|&v| v < 0.0) {
                return Err(Error::contract(format!("batch norm {l} has negative running variance")));
            }
        }
        Ok(())
    }

    fn check_input(&self, features: &Matrix) -> Result<()> {
        if features.cols() != self.spec.input_dim {
            return Err(Error::shape(format!(
                "features have {} columns, model expects {}",
                features.cols(),
                self.spec.input_dim
            )));
        }
        Ok(())
    }

    /// Forward pass in the current mode. Training mode normalizes with batch statistics,
    /// updates the running statistics and returns a cache for [`Self::backward`];
    /// inference mode is [`Self::infer`].
    pub fn forward(&mut self, features: &Matrix) -> Result<Forward> {
        match self.mode {
            Mode::Inference => {
                let (logits, probs) = self.infer(features)?;
                Ok(Forward { logits, probs, cache: None })
            }
            Mode::Training => self.forward_train(features),
        }
    }

    fn forward_train(&mut self, features: &Matrix) -> Result<Forward> {
        self.check_input(features)?;
        let b = features.rows();
        if b < 2 {
            return Err(Error::contract("training-mode batch norm needs a batch of at least 2"));
        }
        let alpha = self.spec.elu_alpha;
        let eps = self.spec.bn_epsilon;
        let momentum = self.spec.bn_momentum;
        let unbias = b as f64 / (b - 1) as f64;

        let mut hidden = Vec::with_capacity(self.norms.len());
        let mut act = features.clone();
        for l in 0..self.norms.len() {
            let z = affine(&act, &self.dense[l]);
            let width = z.cols();
            let bn = &mut self.norms[l];

            let mut mean = vec![0.0; width];
            for row in z.iter_rows() {
                mean.iter_mut().zip(row).for_each(|(m, v)| *m += v);
            }
            mean.iter_mut().for_each(|m| *m /= b as f64);
            let mut var = vec![0.0; width];
            for row in z.iter_rows() {
                for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
                    *s += (v - m) * (v - m);
                }
            }
            var.iter_mut().for_each(|s| *s /= b as f64);
            let inv_std: Vec<f64> = var.iter().map(|v| 1.0 / libm::sqrt(v + eps)).collect();

            let mut normalized = z;
            let mut pre = Matrix::zeros(b, width);
            let mut out = Matrix::zeros(b, width);
            for r in 0..b {
                let xr = normalized.row_mut(r);
                for j in 0..width {
                    xr[j] = (xr[j] - mean[j]) * inv_std[j];
                }
                let pr = pre.row_mut(r);
                for j in 0..width {
                    pr[j] = bn.scale[j] * xr[j] + bn.shift[j];
                }
                let or = out.row_mut(r);
                for j in 0..width {
                    or[j] = elu(pr[j], alpha);
                }
            }
            for j in 0..width {
                bn.running_mean[j] = (1.0 - momentum) * bn.running_mean[j] + momentum * mean[j];
                bn.running_var[j] =
                    (1.0 - momentum) * bn.running_var[j] + momentum * var[j] * unbias;
            }
            check_finite(&out, || format!("hidden layer {}", l + 1))?;
            hidden.push(HiddenCache {
                input: act,
                normalized,
                inv_std,
                pre_activation: pre,
            });
            act = out;
        }

        let logits = affine(&act, self.dense.last().expect("output layer"));
        check_finite(&logits, || "output layer".into())?;
        let probs = softmax_rows(&logits);
        Ok(Forward {
            logits,
            probs,
            cache: Some(Cache { hidden, last_hidden: act, batch_size: b }),
        })
    }

    /// Inference-mode forward pass: batch norm uses the running statistics. This is a pure
    /// function of `(self, features)` whatever the current mode flag says.
    pub fn infer(&self, features: &Matrix) -> Result<(Matrix, Matrix)> {
        self.check_input(features)?;
        let alpha = self.spec.elu_alpha;
        let eps = self.spec.bn_epsilon;
        let mut act = features.clone();
        for l in 0..self.norms.len() {
            let mut z = affine(&act, &self.dense[l]);
            let bn = &self.norms[l];
            let coef: Vec<f64> = bn
                .running_var
                .iter()
                .zip(&bn.scale)
                .map(|(v, s)| s / libm::sqrt(v + eps))
                .collect();
            for r in 0..z.rows() {
                for (j, v) in z.row_mut(r).iter_mut().enumerate() {
                    *v = elu(coef[j] * (*v - bn.running_mean[j]) + bn.shift[j], alpha);
                }
            }
            check_finite(&z, || format!("hidden layer {}", l + 1))?;
            act = z;
        }
        let logits = affine(&act, self.dense.last().expect("output layer"));
        check_finite(&logits, || "output layer".into())?;
        let probs = softmax_rows(&logits);
        Ok((logits, probs))
    }

    /// Predicted labels: row-wise argmax of the inference-mode logits, lowest index on ties.
    pub fn predict(&self, features: &Matrix) -> Result<Vec<usize>> {
        let (logits, _) = self.infer(features)?;
        Ok(argmax_rows(&logits))
    }

    /// Exact gradients of a scalar loss given its gradient with respect to the logits of
    /// the training-mode forward pass that produced `cache`.
    pub fn backward(&self, cache: &Cache, dlogits: &Matrix) -> Result<Gradients> {
        let b = cache.batch_size;
        let k = self.spec.output_dim;
        if dlogits.rows() != b || dlogits.cols() != k {
            return Err(Error::shape(format!(
                "dlogits is {}x{}, expected {b}x{k}",
                dlogits.rows(),
                dlogits.cols()
            )));
        }
        if cache.hidden.len() != self.norms.len() {
            return Err(Error::shape("cache does not come from this architecture"));
        }
        let alpha = self.spec.elu_alpha;
        let mut grads = Gradients::zeros_like(self);
        let out_idx = self.dense.len() - 1;

        gemm(&cache.last_hidden, true, dlogits, false, 0.0, &mut grads.weights[out_idx]);
        column_sums(dlogits, &mut grads.biases[out_idx]);
        let mut upstream = Matrix::zeros(b, self.dense[out_idx].weight.rows());
        gemm(dlogits, false, &self.dense[out_idx].weight, true, 0.0, &mut upstream);

        for l in (0..self.norms.len()).rev() {
            let hc = &cache.hidden[l];
            let bn = &self.norms[l];
            let width = bn.scale.len();

            // Through ELU.
            let mut dpre = upstream;
            for r in 0..b {
                let pr = hc.pre_activation.row(r);
                for (j, g) in dpre.row_mut(r).iter_mut().enumerate() {
                    *g *= elu_grad(pr[j], alpha);
                }
            }

            // Through batch norm.
            let (dscale, dshift) = (&mut grads.bn_scale[l], &mut grads.bn_shift[l]);
            for r in 0..b {
                let (gr, xr) = (dpre.row(r), hc.normalized.row(r));
                for j in 0..width {
                    dscale[j] += gr[j] * xr[j];
                    dshift[j] += gr[j];
                }
            }
            // dz = inv_std / B * (B * dxhat - sum(dxhat) - xhat * sum(dxhat * xhat)),
            // with dxhat = dpre * scale, so the sums are scale * dshift and scale * dscale.
            let mut dz = dpre;
            let bf = b as f64;
            for r in 0..b {
                let xr = hc.normalized.row(r);
                let gr = dz.row_mut(r);
                for j in 0..width {
                    let dxhat = gr[j] * bn.scale[j];
                    gr[j] = hc.inv_std[j] / bf
                        * (bf * dxhat - bn.scale[j] * dshift[j] - xr[j] * bn.scale[j] * dscale[j]);
                }
            }

            gemm(&hc.input, true, &dz, false, 0.0, &mut grads.weights[l]);
            column_sums(&dz, &mut grads.biases[l]);
            if l > 0 {
                let mut next = Matrix::zeros(b, self.dense[l].weight.rows());
                gemm(&dz, false, &self.dense[l].weight, true, 0.0, &mut next);
                upstream = next;
            } else {
                upstream = Matrix::zeros(0, 0);
            }
        }
        Ok(grads)
    }
}

fn column_sums(m: &Matrix, out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    for row in m.iter_rows() {
        out.iter_mut().zip(row).for_each(|(o, v)| *o += v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn small_spec() -> ModelSpec {
        ModelSpec::new(5, 3).with_hidden(vec![4, 3])
    }

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
        let mut r = rng::stream(seed, "test", 0);
        Matrix::from_vec(rows, cols, (0..rows * cols).map(|_| r.random_range(-1.0..1.0)).collect())
            .unwrap()
    }

    #[test]
    fn parameter_count_for_default_net() {
        // 10*512+512 + 512*256+256 + 256*4+4 = 137_988 dense, 2*(512+256) = 1_536 bn.
        assert_eq!(ModelSpec::new(10, 4).parameter_count(), 139_524);
    }

    #[test]
    fn parameter_count_matches_tensor_sizes() {
        let p = init_model(&ModelSpec::new(10, 4), 1).unwrap();
        assert_eq!(p.scalar_count(), 139_524);
    }

    #[test]
    fn init_is_deterministic() {
        let a = init_model(&small_spec(), 7).unwrap();
        let b = init_model(&small_spec(), 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, init_model(&small_spec(), 8).unwrap());
    }

    #[test]
    fn init_conventions() {
        let p = init_model(&ModelSpec::new(6, 3), 3).unwrap();
        for n in &p.norms {
            assert!(n.running_var.iter().all(|&v| v == 1.0));
            assert!(n.running_mean.iter().all(|&v| v == 0.0));
            assert!(n.scale.iter().all(|&v| v == 1.0));
            assert!(n.shift.iter().all(|&v| v == 0.0));
        }
        for d in &p.dense {
            assert!(d.bias.iter().all(|&v| v == 0.0));
            let limit = (3.0 / d.weight.rows() as f64).sqrt();
            assert!(d.weight.as_slice().iter().all(|w| w.abs() <= limit));
        }
        p.validate().unwrap();
    }

    #[test]
    fn init_rejects_zero_dims() {
        assert!(init_model(&ModelSpec::new(0, 3), 0).is_err());
        assert!(init_model(&ModelSpec::new(3, 0), 0).is_err());
        assert!(init_model(&ModelSpec::new(3, 3).with_hidden(vec![4, 0]), 0).is_err());
        assert!(init_model(&ModelSpec::new(3, 3).with_hidden(vec![]), 0).is_err());
    }

    #[test]
    fn softmax_rows_normalized() {
        let mut p = init_model(&small_spec(), 1).unwrap();
        let f = p.forward(&random_matrix(6, 5, 2)).unwrap();
        for row in f.probs.iter_rows() {
            let s: f64 = row.iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
            assert!(row.iter().all(|&v| v > 0.0 && v < 1.0));
        }
        assert_eq!(argmax_rows(&f.probs), argmax_rows(&f.logits));
    }

    #[test]
    fn identical_rows_normalize_to_shift() {
        let mut p = init_model(&small_spec(), 1).unwrap();
        p.norms[0].shift = vec![0.3, -0.2, 0.1, 0.0];
        let x = Matrix::from_rows(&[[1.0, 2.0, 3.0, 4.0, 5.0]; 4]).unwrap();
        let f = p.forward(&x).unwrap();
        let hc = &f.cache.unwrap().hidden[0];
        for r in 0..4 {
            assert_eq!(hc.pre_activation.row(r), &[0.3, -0.2, 0.1, 0.0]);
        }
    }

    #[test]
    fn training_forward_needs_two_rows() {
        let mut p = init_model(&small_spec(), 1).unwrap();
        assert!(p.forward(&random_matrix(1, 5, 1)).is_err());
        p.set_mode(Mode::Inference);
        assert!(p.forward(&random_matrix(1, 5, 1)).is_ok());
    }

    #[test]
    fn forward_rejects_wrong_width() {
        let mut p = init_model(&small_spec(), 1).unwrap();
        assert!(matches!(p.forward(&random_matrix(3, 4, 1)), Err(Error::Shape(_))));
    }

    #[test]
    fn non_finite_input_names_layer() {
        let mut p = init_model(&small_spec(), 1).unwrap();
        let mut x = random_matrix(3, 5, 1);
        x.set(0, 0, f64::NAN);
        match p.forward(&x) {
            Err(Error::NumericFailure(what)) => assert_eq!(what, "hidden layer 1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn logits_deterministic() {
        let x = random_matrix(6, 5, 3);
        let mut a = init_model(&small_spec(), 4).unwrap();
        let mut b = init_model(&small_spec(), 4).unwrap();
        assert_eq!(a.forward(&x).unwrap().logits, b.forward(&x).unwrap().logits);
        assert_eq!(a, b);
    }

    #[test]
    fn backward_is_linear_in_upstream() {
        let mut p = init_model(&small_spec(), 5).unwrap();
        let f = p.forward(&random_matrix(6, 5, 6)).unwrap();
        let cache = f.cache.unwrap();

        let zero = p.backward(&cache, &Matrix::zeros(6, 3)).unwrap();
        assert!(zero.tensors().iter().all(|t| t.iter().all(|&v| v == 0.0)));

        let g = random_matrix(6, 3, 7);
        let mut g2 = g.clone();
        g2.scale(2.0);
        let one = p.backward(&cache, &g).unwrap();
        let two = p.backward(&cache, &g2).unwrap();
        for (a, b) in one.tensors().iter().zip(two.tensors()) {
            for (x, y) in a.iter().zip(b) {
                assert_eq!(2.0 * x, *y);
            }
        }
    }

    #[test]
    fn backward_rejects_shape_mismatch() {
        let mut p = init_model(&small_spec(), 5).unwrap();
        let cache = p.forward(&random_matrix(6, 5, 6)).unwrap().cache.unwrap();
        assert!(matches!(p.backward(&cache, &Matrix::zeros(5, 3)), Err(Error::Shape(_))));
    }

    #[test]
    fn predict_examples() {
        let logits = Matrix::from_rows(&[[0.1, 2.0, -1.0], [1.0, 1.0, 0.0]]).unwrap();
        assert_eq!(argmax_rows(&logits), vec![1, 0]);
        let mut shifted = logits.clone();
        shifted.as_mut_slice().iter_mut().for_each(|v| *v += 17.5);
        assert_eq!(argmax_rows(&shifted), argmax_rows(&logits));
    }

    #[test]
    fn inference_is_pure() {
        let mut p = init_model(&small_spec(), 9).unwrap();
        p.forward(&random_matrix(8, 5, 1)).unwrap();
        p.set_mode(Mode::Inference);
        let before = p.clone();
        let x = random_matrix(4, 5, 2);
        let a = p.forward(&x).unwrap();
        let b = p.forward(&x).unwrap();
        assert_eq!(a.logits, b.logits);
        assert_eq!(p, before);
    }

    #[test]
    fn running_stats_converge_on_constant_batch() {
        let mut p = init_model(&small_spec(), 2).unwrap();
        let x = random_matrix(8, 5, 3);
        let z = affine(&x, &p.dense[0]);
        let b = z.rows() as f64;
        for _ in 0..300 {
            p.forward(&x).unwrap();
        }
        for j in 0..z.cols() {
            let col: Vec<f64> = (0..z.rows()).map(|r| z.get(r, j)).collect();
            let mean = col.iter().sum::<f64>() / b;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (b - 1.0);
            assert!((p.norms[0].running_mean[j] - mean).abs() < 1e-9);
            assert!((p.norms[0].running_var[j] - var).abs() < 1e-9);
        }
        // Inference now reproduces the training-mode normalization of the same batch,
        // up to the unbiased-variance factor and epsilon.
        let train_logits = p.clone().forward(&x).unwrap().logits;
        p.set_mode(Mode::Inference);
        let infer_logits = p.forward(&x).unwrap().logits;
        for (a, b) in train_logits.as_slice().iter().zip(infer_logits.as_slice()) {
            assert!((a - b).abs() < 0.25 * (1.0 + a.abs()));
        }
    }
}
