//! Finite-difference checks of every analytic gradient.

use catgain::gain::{
    discriminator_gradients, generator_gradients, loss_d, loss_g, loss_sim, Batch, GainModel,
};
use catgain::linalg::Matrix;
use catgain::nn::{Activation, HeadBlock, HeadKind, Mlp, MlpGrads};
use catgain::rng::Seed;
use rand::Rng;

use super::{jitter_biases, max_rel_error, numeric_gradient, random_instance, relu_margin};

const H: f64 = 1e-5;
pub const TOL: f64 = 1e-4;
const FLOOR: f64 = 1e-6;
pub const INSTANCES: u64 = 24;

fn flat(g: &MlpGrads) -> Vec<f64> {
    g.slices().concat()
}

fn params(m: &Mlp) -> Vec<f64> {
    (0..m.param_count()).map(|i| m.param(i)).collect()
}

fn with_params(m: &Mlp, theta: &[f64]) -> Mlp {
    let mut m = m.clone();
    for (i, &v) in theta.iter().enumerate() {
        m.set_param(i, v);
    }
    m
}

/// Batch-mean discriminator loss, evaluated by plain forward passes.
fn d_objective(model: &GainModel, b: &Batch) -> f64 {
    let (_, g) = model.generate(&b.values, &b.mask, &b.seeds).unwrap();
    let mu_hat = model.discriminate(&g, &b.hints).unwrap();
    (0..g.rows()).map(|r| loss_d(b.mu.row(r), mu_hat.row(r))).sum::<f64>() / g.rows() as f64
}

/// Batch-mean generator objective `loss_g + λ·loss_sim`.
fn g_objective(model: &GainModel, b: &Batch) -> f64 {
    let (raw, g) = model.generate(&b.values, &b.mask, &b.seeds).unwrap();
    let mu_hat = model.discriminate(&g, &b.hints).unwrap();
    let lambda = model.params().lambda_sim;
    (0..g.rows())
        .map(|r| {
            loss_g(b.mu.row(r), mu_hat.row(r))
                + lambda * loss_sim(b.values.row(r), raw.row(r), b.mask.row(r), model.schema())
        })
        .sum::<f64>()
        / g.rows() as f64
}

pub fn discriminator_error(seed: u64) -> f64 {
    let (model, batch) = random_instance(seed);
    let (grads, _) = discriminator_gradients(&model, &batch).unwrap();
    let theta = params(&model.discriminator);
    let numeric = numeric_gradient(&theta, H, |t| {
        let mut m = model.clone();
        m.discriminator = with_params(&model.discriminator, t);
        d_objective(&m, &batch)
    });
    max_rel_error(&flat(&grads), &numeric, FLOOR)
}

pub fn generator_error(seed: u64) -> f64 {
    let (model, batch) = random_instance(seed);
    let (grads, _, _) = generator_gradients(&model, &batch).unwrap();
    let theta = params(&model.generator);
    let numeric = numeric_gradient(&theta, H, |t| {
        let mut m = model.clone();
        m.generator = with_params(&model.generator, t);
        g_objective(&m, &batch)
    });
    max_rel_error(&flat(&grads), &numeric, FLOOR)
}

/// Network with the given output activation; the loss is `Σ w ∘ output` for
/// fixed random weights `w`. Returns the worst error over parameters and
/// inputs. Draws with a relu pre-activation near its kink are replaced.
pub fn mlp_error(seed: u64, output: Activation) -> f64 {
    let rows = 3;
    let (net, x, w) = (0..)
        .map(|attempt| {
            let mut rng = Seed(seed).substream("mlp", &[attempt]);
            let hidden = [Activation::Relu, Activation::Tanh, Activation::Sigmoid][rng.gen_range(0..3)].clone();
            let mut net = Mlp::glorot(&[4, 5, 3, 5], hidden, output.clone(), &mut rng).unwrap();
            jitter_biases(&mut net, &mut rng);
            let x = Matrix::from_vec(rows, 4, (0..rows * 4).map(|_| rng.gen_range(-1.0..1.0)).collect());
            let w = Matrix::from_vec(rows, 5, (0..rows * 5).map(|_| rng.gen_range(-1.0..1.0)).collect());
            (net, x, w)
        })
        .find(|(net, x, _)| relu_margin(net, x) > 1e-3)
        .unwrap();
    let loss = |m: &Mlp, x: &Matrix| {
        let out = m.predict(x).unwrap();
        out.as_slice().iter().zip(w.as_slice()).map(|(a, b)| a * b).sum::<f64>()
    };
    let cache = net.forward(&x).unwrap();
    let (grads, d_in) = net.backward(&cache, &w).unwrap();
    let theta = params(&net);
    let num_p = numeric_gradient(&theta, H, |t| loss(&with_params(&net, t), &x));
    let num_x = numeric_gradient(x.as_slice(), H, |v| loss(&net, &Matrix::from_vec(rows, 4, v.to_vec())));
    max_rel_error(&flat(&grads), &num_p, FLOOR).max(max_rel_error(d_in.as_slice(), &num_x, FLOOR))
}

pub fn output_activations() -> Vec<Activation> {
    vec![
        Activation::Linear,
        Activation::Relu,
        Activation::Sigmoid,
        Activation::Tanh,
        Activation::Heads(vec![
            HeadBlock { offset: 0, width: 3, kind: HeadKind::Softmax },
            HeadBlock { offset: 3, width: 2, kind: HeadKind::Sigmoid },
        ]),
    ]
}

