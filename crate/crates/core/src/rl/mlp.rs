use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::RlError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Activation {
    Identity,
    Tanh,
    Sigmoid,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Identity => z,
            Activation::Tanh => z.tanh(),
            Activation::Sigmoid => 1.0 / (1.0 + (-z).exp()),
        }
    }

    /// Derivative expressed through the activation's output.
    fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            Activation::Identity => 1.0,
            Activation::Tanh => 1.0 - y * y,
            Activation::Sigmoid => y * (1.0 - y),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Identity => "identity",
            Activation::Tanh => "tanh",
            Activation::Sigmoid => "sigmoid",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "identity" => Some(Activation::Identity),
            "tanh" => Some(Activation::Tanh),
            "sigmoid" => Some(Activation::Sigmoid),
            _ => None,
        }
    }
}

/// Fully connected layer `y = act(W x + b)`, `W` is `out x in`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: DMatrix<f64>,
    pub bias: DVector<f64>,
    pub activation: Activation,
}

/// A plain multilayer perceptron. Batches are matrices with one sample per
/// column.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub layers: Vec<Layer>,
}

/// Layer outputs kept from a forward pass; `outputs[0]` is the input.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    outputs: Vec<DMatrix<f64>>,
}

impl ForwardCache {
    pub fn output(&self) -> &DMatrix<f64> {
        self.outputs.last().expect("cache holds at least the input")
    }
}

/// Per-layer `(dW, db)`, same shapes as the network.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<(DMatrix<f64>, DVector<f64>)>,
}

impl Gradients {
    pub fn zeros_like(net: &Mlp) -> Self {
        Self {
            layers: net
                .layers
                .iter()
                .map(|l| (DMatrix::zeros(l.weights.nrows(), l.weights.ncols()), DVector::zeros(l.bias.len())))
                .collect(),
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for (w, b) in &mut self.layers {
            *w *= factor;
            *b *= factor;
        }
    }

    pub fn flat(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (w, b) in &self.layers {
            out.extend(w.iter());
            out.extend(b.iter());
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.flat().iter().fold(0.0, |acc, g| acc.max(g.abs()))
    }
}

impl Mlp {
    /// Glorot-uniform hidden layers; the output layer is drawn from
    /// `U(-final_init, final_init)`.
    pub fn new<R: Rng + ?Sized>(
        sizes: &[usize],
        hidden: Activation,
        output: Activation,
        final_init: f64,
        rng: &mut R,
    ) -> Self {
        assert!(sizes.len() >= 2, "need input and output sizes");
        let n = sizes.len() - 1;
        let layers = (0..n)
            .map(|i| {
                let (fan_in, fan_out) = (sizes[i], sizes[i + 1]);
                let last = i + 1 == n;
                let limit = if last { final_init } else { (6.0 / (fan_in + fan_out) as f64).sqrt() };
                let weights = DMatrix::from_fn(fan_out, fan_in, |_, _| rng.random_range(-limit..=limit));
                let bias = if last {
                    DVector::from_fn(fan_out, |_, _| rng.random_range(-limit..=limit))
                } else {
                    DVector::zeros(fan_out)
                };
                Layer { weights, bias, activation: if last { output } else { hidden } }
            })
            .collect();
        Self { layers }
    }

    /// Deterministic policy: `d_in -> 64 -> 64 -> d_out`, squashed into (0, 1).
    pub fn actor<R: Rng + ?Sized>(d_in: usize, d_out: usize, rng: &mut R) -> Self {
        Self::new(&[d_in, 64, 64, d_out], Activation::Tanh, Activation::Sigmoid, 3e-3, rng)
    }

    /// Action-value function: `d_in -> 128 -> 128 -> 1`.
    pub fn critic<R: Rng + ?Sized>(d_in: usize, rng: &mut R) -> Self {
        Self::new(&[d_in, 128, 128, 1], Activation::Tanh, Activation::Identity, 3e-3, rng)
    }

    /// A single layer with the given parameters.
    pub fn single(weights: DMatrix<f64>, bias: DVector<f64>, activation: Activation) -> Self {
        assert_eq!(weights.nrows(), bias.len());
        Self { layers: vec![Layer { weights, bias, activation }] }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].weights.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("non-empty").weights.nrows()
    }

    pub fn num_params(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    pub fn same_shape(&self, other: &Mlp) -> bool {
        self.layers.len() == other.layers.len()
            && self.layers.iter().zip(&other.layers).all(|(a, b)| {
                a.weights.shape() == b.weights.shape() && a.activation == b.activation
            })
    }

    /// Output for a single input vector.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>, RlError> {
        let x = DMatrix::from_column_slice(input.len(), 1, input);
        Ok(self.forward_batch(&x)?.output().iter().copied().collect())
    }

    /// Forward pass over a batch (one sample per column).
    pub fn forward_batch(&self, input: &DMatrix<f64>) -> Result<ForwardCache, RlError> {
        if input.nrows() != self.input_dim() {
            return Err(RlError::Dimension { expected: self.input_dim(), got: input.nrows() });
        }
        let mut outputs = Vec::with_capacity(self.layers.len() + 1);
        outputs.push(input.clone());
        for layer in &self.layers {
            let prev = outputs.last().expect("non-empty");
            let mut z = &layer.weights * prev;
            for mut col in z.column_iter_mut() {
                col += &layer.bias;
            }
            let act = layer.activation;
            z.apply(|v| *v = act.apply(*v));
            outputs.push(z);
        }
        Ok(ForwardCache { outputs })
    }

    /// Backpropagates `upstream` (d loss / d output, one column per sample)
    /// and returns parameter gradients summed over the batch together with
    /// d loss / d input.
    pub fn backward(&self, cache: &ForwardCache, upstream: &DMatrix<f64>) -> (Gradients, DMatrix<f64>) {
        let mut grads = Vec::with_capacity(self.layers.len());
        let mut delta = upstream.clone();
        for (i, layer) in self.layers.iter().enumerate().rev() {
            let out = &cache.outputs[i + 1];
            let act = layer.activation;
            delta.zip_apply(out, |d, y| *d *= act.derivative_from_output(y));
            let input = &cache.outputs[i];
            let dw = &delta * input.transpose();
            let db = DVector::from_iterator(delta.nrows(), delta.row_iter().map(|r| r.sum()));
            grads.push((dw, db));
            delta = layer.weights.transpose() * &delta;
        }
        grads.reverse();
        (Gradients { layers: grads }, delta)
    }

    /// Gradients of `output . sensitivity` for one input.
    pub fn gradients(&self, input: &[f64], sensitivity: &[f64]) -> Result<(Gradients, Vec<f64>), RlError> {
        if sensitivity.len() != self.output_dim() {
            return Err(RlError::Dimension { expected: self.output_dim(), got: sensitivity.len() });
        }
        let cache = self.forward_batch(&DMatrix::from_column_slice(input.len(), 1, input))?;
        let (g, dx) = self.backward(&cache, &DMatrix::from_column_slice(sensitivity.len(), 1, sensitivity));
        Ok((g, dx.iter().copied().collect()))
    }

    /// Parameters in layer order, weights (column-major) then bias.
    pub fn params_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_params());
        for l in &self.layers {
            out.extend(l.weights.iter());
            out.extend(l.bias.iter());
        }
        out
    }

    pub fn set_params_flat(&mut self, params: &[f64]) -> Result<(), RlError> {
        if params.len() != self.num_params() {
            return Err(RlError::Dimension { expected: self.num_params(), got: params.len() });
        }
        let mut it = params.iter();
        for l in &mut self.layers {
            for w in l.weights.iter_mut() {
                *w = *it.next().expect("length checked");
            }
            for b in l.bias.iter_mut() {
                *b = *it.next().expect("length checked");
            }
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.layers.iter().all(|l| l.weights.iter().chain(l.bias.iter()).all(|v| v.is_finite()))
    }
}
