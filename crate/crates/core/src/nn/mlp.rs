use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Activation, DenseLayer, LayerGrads, NnError};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    layers: Vec<DenseLayer>,
}

/// Everything [`Mlp::backward`] needs from the matching forward pass.
#[derive(Clone, Debug)]
pub struct ForwardCache {
    /// `activations[0]` is the input, `activations[l + 1]` the output of layer `l`.
    activations: Vec<Matrix>,
    pre: Vec<Matrix>,
}

impl ForwardCache {
    pub fn output(&self) -> &Matrix {
        self.activations.last().expect("cache always holds the input")
    }

    pub fn input(&self) -> &Matrix {
        &self.activations[0]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MlpGrads {
    pub layers: Vec<LayerGrads>,
}

impl MlpGrads {
    pub fn zeros_like(mlp: &Mlp) -> Self {
        MlpGrads {
            layers: mlp
                .layers
                .iter()
                .map(|l| LayerGrads {
                    weights: Matrix::zeros(l.output_width(), l.input_width()),
                    bias: vec![0.0; l.output_width()],
                })
                .collect(),
        }
    }

    pub fn slices(&self) -> Vec<&[f64]> {
        self.layers
            .iter()
            .flat_map(|g| [g.weights.as_slice(), g.bias.as_slice()])
            .collect()
    }

    /// Flat parameter index, in the same order as [`Mlp::param`].
    pub fn get(&self, mut i: usize) -> f64 {
        for s in self.slices() {
            if i < s.len() {
                return s[i];
            }
            i -= s.len();
        }
        panic!("gradient index out of range");
    }

    pub fn scale(&mut self, s: f64) {
        for g in &mut self.layers {
            g.weights.scale(s);
            g.bias.iter_mut().for_each(|b| *b *= s);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.slices().iter().all(|s| s.iter().all(|v| v.is_finite()))
    }
}

impl Mlp {
    pub fn new(layers: Vec<DenseLayer>) -> Result<Self, NnError> {
        if layers.is_empty() {
            return Err(NnError::InvalidArchitecture("no layers".into()));
        }
        for (l, w) in layers.iter().zip(layers.iter().skip(1)) {
            if l.output_width() != w.input_width() {
                return Err(NnError::InvalidArchitecture(format!(
                    "layer widths {} -> {} do not chain",
                    l.output_width(),
                    w.input_width()
                )));
            }
        }
        for l in &layers {
            if l.bias.len() != l.output_width() {
                return Err(NnError::InvalidArchitecture("bias width mismatch".into()));
            }
            l.activation
                .check_width(l.output_width())
                .map_err(NnError::InvalidArchitecture)?;
        }
        Ok(Mlp { layers })
    }

    /// Glorot-initialised network `widths[0] → … → widths[last]`, with
    /// `hidden` on every hidden layer and `output` on the last one.
    pub fn glorot<R: Rng + ?Sized>(
        widths: &[usize],
        hidden: Activation,
        output: Activation,
        rng: &mut R,
    ) -> Result<Self, NnError> {
        if widths.len() < 2 {
            return Err(NnError::InvalidArchitecture(
                "need at least input and output widths".into(),
            ));
        }
        let last = widths.len() - 2;
        let layers = widths
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let act = if i == last { output.clone() } else { hidden.clone() };
                DenseLayer::glorot(w[0], w[1], act, rng)
            })
            .collect();
        Mlp::new(layers)
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [DenseLayer] {
        &mut self.layers
    }

    pub fn input_width(&self) -> usize {
        self.layers[0].input_width()
    }

    pub fn output_width(&self) -> usize {
        self.layers.last().map_or(0, DenseLayer::output_width)
    }

    pub fn forward(&self, input: &Matrix) -> Result<ForwardCache, NnError> {
        if input.cols() != self.input_width() {
            return Err(NnError::DimensionMismatch {
                context: "network input",
                expected: self.input_width(),
                got: input.cols(),
            });
        }
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        let mut pre = Vec::with_capacity(self.layers.len());
        activations.push(input.clone());
        for layer in &self.layers {
            let (z, a) = layer.forward(activations.last().unwrap());
            pre.push(z);
            activations.push(a);
        }
        Ok(ForwardCache { activations, pre })
    }

    /// Forward pass returning only the output.
    pub fn predict(&self, input: &Matrix) -> Result<Matrix, NnError> {
        if input.cols() != self.input_width() {
            return Err(NnError::DimensionMismatch {
                context: "network input",
                expected: self.input_width(),
                got: input.cols(),
            });
        }
        let mut x = input.clone();
        for layer in &self.layers {
            x = layer.forward(&x).1;
        }
        Ok(x)
    }

    /// Backpropagates `d_out = ∂L/∂output` (batch × output width). Returns the
    /// parameter gradients and `∂L/∂input`.
    pub fn backward(&self, cache: &ForwardCache, d_out: &Matrix) -> Result<(MlpGrads, Matrix), NnError> {
        if cache.pre.len() != self.layers.len() {
            return Err(NnError::StaleCache(format!(
                "{} cached layers for a {}-layer network",
                cache.pre.len(),
                self.layers.len()
            )));
        }
        for (l, z) in self.layers.iter().zip(&cache.pre) {
            if z.cols() != l.output_width() {
                return Err(NnError::StaleCache("layer width changed".into()));
            }
        }
        if d_out.shape() != cache.output().shape() {
            return Err(NnError::DimensionMismatch {
                context: "output gradient",
                expected: cache.output().cols(),
                got: d_out.cols(),
            });
        }
        let mut grads = Vec::with_capacity(self.layers.len());
        let mut delta = d_out.clone();
        for (l, layer) in self.layers.iter().enumerate().rev() {
            let (g, d_in) = layer.backward(
                &cache.activations[l],
                &cache.pre[l],
                &cache.activations[l + 1],
                &delta,
            );
            grads.push(g);
            delta = d_in;
        }
        grads.reverse();
        Ok((MlpGrads { layers: grads }, delta))
    }

    pub fn param_slices_mut(&mut self) -> Vec<&mut [f64]> {
        self.layers
            .iter_mut()
            .flat_map(|l| [l.weights.as_mut_slice(), l.bias.as_mut_slice()])
            .collect()
    }

    pub fn param_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.as_slice().len() + l.bias.len())
            .sum()
    }

    fn locate(&self, mut i: usize) -> (usize, bool, usize) {
        for (l, layer) in self.layers.iter().enumerate() {
            let nw = layer.weights.as_slice().len();
            if i < nw {
                return (l, false, i);
            }
            i -= nw;
            if i < layer.bias.len() {
                return (l, true, i);
            }
            i -= layer.bias.len();
        }
        panic!("parameter index out of range");
    }

    /// Flat parameter access: per layer, weights (row-major) then bias.
    pub fn param(&self, i: usize) -> f64 {
        match self.locate(i) {
            (l, false, k) => self.layers[l].weights.as_slice()[k],
            (l, true, k) => self.layers[l].bias[k],
        }
    }

    pub fn set_param(&mut self, i: usize, v: f64) {
        match self.locate(i) {
            (l, false, k) => self.layers[l].weights.as_mut_slice()[k] = v,
            (l, true, k) => self.layers[l].bias[k] = v,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.weights.is_finite() && l.bias.iter().all(|b| b.is_finite()))
    }
}
