use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Activation;
use crate::linalg::{axpy, Matrix};

/// `y = act(W·x + b)` with `W` stored `out × in`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseLayer {
    pub weights: Matrix,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayerGrads {
    pub weights: Matrix,
    pub bias: Vec<f64>,
}

impl DenseLayer {
    pub fn zeros(input: usize, output: usize, activation: Activation) -> Self {
        DenseLayer {
            weights: Matrix::zeros(output, input),
            bias: vec![0.0; output],
            activation,
        }
    }

    /// Glorot-uniform weights in `±√(6/(fan_in+fan_out))`, zero bias.
    pub fn glorot<R: Rng + ?Sized>(
        input: usize,
        output: usize,
        activation: Activation,
        rng: &mut R,
    ) -> Self {
        let limit = (6.0 / (input + output) as f64).sqrt();
        let mut layer = Self::zeros(input, output, activation);
        for w in layer.weights.as_mut_slice() {
            *w = rng.gen_range(-limit..limit);
        }
        layer
    }

    pub fn input_width(&self) -> usize {
        self.weights.cols()
    }

    pub fn output_width(&self) -> usize {
        self.weights.rows()
    }

    /// Returns `(pre_activation, output)` for a batch.
    pub fn forward(&self, input: &Matrix) -> (Matrix, Matrix) {
        let mut pre = input.matmul_t(&self.weights);
        for r in 0..pre.rows() {
            for (z, b) in pre.row_mut(r).iter_mut().zip(&self.bias) {
                *z += b;
            }
        }
        let mut out = Matrix::zeros(pre.rows(), pre.cols());
        for r in 0..pre.rows() {
            self.activation.apply(pre.row(r), out.row_mut(r));
        }
        (pre, out)
    }

    /// Gradients of a batch-summed scalar given `d_out = ∂L/∂output`.
    pub fn backward(
        &self,
        input: &Matrix,
        pre: &Matrix,
        out: &Matrix,
        d_out: &Matrix,
    ) -> (LayerGrads, Matrix) {
        let (batch, width) = d_out.shape();
        let mut d_pre = Matrix::zeros(batch, width);
        for r in 0..batch {
            self.activation
                .backward(pre.row(r), out.row(r), d_out.row(r), d_pre.row_mut(r));
        }
        let mut dw = Matrix::zeros(width, self.input_width());
        let mut db = vec![0.0; width];
        let mut d_in = Matrix::zeros(batch, self.input_width());
        for r in 0..batch {
            let x = input.row(r);
            let dz = d_pre.row(r);
            for (o, &g) in dz.iter().enumerate() {
                if g != 0.0 {
                    axpy(g, x, dw.row_mut(o));
                    axpy(g, self.weights.row(o), d_in.row_mut(r));
                }
                db[o] += g;
            }
        }
        (
            LayerGrads {
                weights: dw,
                bias: db,
            },
            d_in,
        )
    }
}
