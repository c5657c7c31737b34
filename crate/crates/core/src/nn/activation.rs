use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeadKind {
    Softmax,
    Sigmoid,
}

/// A contiguous slice of an output layer with its own activation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeadBlock {
    pub offset: usize,
    pub width: usize,
    pub kind: HeadKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Activation {
    Linear,
    Relu,
    Sigmoid,
    Tanh,
    /// Output partitioned into blocks, each with softmax or elementwise sigmoid.
    Heads(Vec<HeadBlock>),
}

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn softmax_into(pre: &[f64], out: &mut [f64]) {
    let max = pre.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (o, &p) in out.iter_mut().zip(pre) {
        *o = (p - max).exp();
        sum += *o;
    }
    out.iter_mut().for_each(|o| *o /= sum);
}

impl Activation {
    /// Checks that head blocks tile `width` exactly.
    pub(crate) fn check_width(&self, width: usize) -> Result<(), String> {
        if let Activation::Heads(blocks) = self {
            let mut next = 0;
            for b in blocks {
                if b.offset != next || b.width == 0 {
                    return Err(format!("head blocks do not tile the output: {blocks:?}"));
                }
                next += b.width;
            }
            if next != width {
                return Err(format!("head blocks cover {next} of {width} outputs"));
            }
        }
        Ok(())
    }

    pub fn apply(&self, pre: &[f64], out: &mut [f64]) {
        match self {
            Activation::Linear => out.copy_from_slice(pre),
            Activation::Relu => {
                for (o, &p) in out.iter_mut().zip(pre) {
                    *o = if p > 0.0 { p } else { 0.0 };
                }
            }
            Activation::Sigmoid => {
                for (o, &p) in out.iter_mut().zip(pre) {
                    *o = sigmoid(p);
                }
            }
            Activation::Tanh => {
                for (o, &p) in out.iter_mut().zip(pre) {
                    *o = p.tanh();
                }
            }
            Activation::Heads(blocks) => {
                for b in blocks {
                    let r = b.offset..b.offset + b.width;
                    match b.kind {
                        HeadKind::Softmax => softmax_into(&pre[r.clone()], &mut out[r]),
                        HeadKind::Sigmoid => {
                            for (o, &p) in out[r.clone()].iter_mut().zip(&pre[r]) {
                                *o = sigmoid(p);
                            }
                        }
                    }
                }
            }
        }
    }

    /// Vector-Jacobian product: gradient w.r.t. the pre-activation given the
    /// gradient w.r.t. the output.
    pub fn backward(&self, pre: &[f64], out: &[f64], d_out: &[f64], d_pre: &mut [f64]) {
        match self {
            Activation::Linear => d_pre.copy_from_slice(d_out),
            Activation::Relu => {
                for ((d, &p), &g) in d_pre.iter_mut().zip(pre).zip(d_out) {
                    *d = if p > 0.0 { g } else { 0.0 };
                }
            }
            Activation::Sigmoid => sigmoid_backward(out, d_out, d_pre),
            Activation::Tanh => {
                for ((d, &y), &g) in d_pre.iter_mut().zip(out).zip(d_out) {
                    *d = g * (1.0 - y * y);
                }
            }
            Activation::Heads(blocks) => {
                for b in blocks {
                    let r = b.offset..b.offset + b.width;
                    let (y, g, d) = (&out[r.clone()], &d_out[r.clone()], &mut d_pre[r]);
                    match b.kind {
                        HeadKind::Softmax => {
                            let inner: f64 = y.iter().zip(g).map(|(a, b)| a * b).sum();
                            for ((dk, &yk), &gk) in d.iter_mut().zip(y).zip(g) {
                                *dk = yk * (gk - inner);
                            }
                        }
                        HeadKind::Sigmoid => sigmoid_backward(y, g, d),
                    }
                }
            }
        }
    }

    pub(crate) fn tag(&self) -> u8 {
        match self {
            Activation::Linear => 0,
            Activation::Relu => 1,
            Activation::Sigmoid => 2,
            Activation::Tanh => 3,
            Activation::Heads(_) => 4,
        }
    }
}

fn sigmoid_backward(y: &[f64], g: &[f64], d: &mut [f64]) {
    for ((dk, &yk), &gk) in d.iter_mut().zip(y).zip(g) {
        *dk = gk * yk * (1.0 - yk);
    }
}
