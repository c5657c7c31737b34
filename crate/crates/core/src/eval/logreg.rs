use serde::Serialize;

use super::EvalError;
use crate::linalg::{dot, Matrix};
use crate::nn::sigmoid;

pub const LOGREG_TOL: f64 = 1e-6;
pub const LOGREG_MAX_ITER: usize = 10_000;

/// Binary logistic regression with an L2 penalty on the weights (the
/// intercept is not penalised).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogisticRegression {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub iterations: usize,
}

struct Problem<'a> {
    x: &'a Matrix,
    y: &'a [f64],
    lambda: f64,
}

impl Problem<'_> {
    fn margins(&self, theta: &[f64]) -> Vec<f64> {
        let d = self.x.cols();
        self.x.row_iter().map(|r| dot(r, &theta[..d]) + theta[d]).collect()
    }

    fn gradient(&self, theta: &[f64]) -> Vec<f64> {
        let d = self.x.cols();
        let mut g = vec![0.0; d + 1];
        for ((row, z), &y) in self.x.row_iter().zip(self.margins(theta)).zip(self.y) {
            let r = sigmoid(z) - y;
            for (gk, &xk) in g[..d].iter_mut().zip(row) {
                *gk += r * xk;
            }
            g[d] += r;
        }
        for (gk, &w) in g[..d].iter_mut().zip(&theta[..d]) {
            *gk += self.lambda * w;
        }
        g
    }
}

impl LogisticRegression {
    /// Minimises `Σ log-loss + λ/2 ‖w‖²` by accelerated gradient descent with
    /// backtracking and gradient restarts, until the gradient norm drops
    /// below [`LOGREG_TOL`].
    pub fn fit(x: &Matrix, y: &[f64], lambda: f64) -> Result<Self, EvalError> {
        if x.rows() != y.len() {
            return Err(EvalError::Length(format!("{} rows vs {} labels", x.rows(), y.len())));
        }
        if !x.is_finite() {
            return Err(EvalError::NonFinite);
        }
        if y.iter().any(|&v| v != 0.0 && v != 1.0) {
            return Err(EvalError::InvalidLabel);
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(EvalError::InvalidConfig(format!("ridge strength {lambda}")));
        }
        let prob = Problem { x, y, lambda };
        let dim = x.cols() + 1;
        let mut theta = vec![0.0; dim];
        let mut look = theta.clone();
        let mut t = 1.0f64;
        let mut lip = 1.0f64;
        let mut grad_norm = f64::INFINITY;

        for iter in 0..LOGREG_MAX_ITER {
            let g_theta = prob.gradient(&theta);
            grad_norm = dot(&g_theta, &g_theta).sqrt();
            if grad_norm < LOGREG_TOL {
                return Ok(Self::from_theta(theta, iter));
            }
            let g = prob.gradient(&look);
            // The step size is accepted once the local gradient change is
            // bounded by `lip`. Unlike a function-value test this stays
            // meaningful when objective differences fall below rounding.
            let next = loop {
                let cand: Vec<f64> = look.iter().zip(&g).map(|(a, b)| a - b / lip).collect();
                let gc = prob.gradient(&cand);
                let dg: f64 = gc.iter().zip(&g).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                let dx: f64 = dot(&g, &g).sqrt() / lip;
                if dg <= lip * dx || lip > 1e300 {
                    break cand;
                }
                lip *= 2.0;
            };
            let step: Vec<f64> = next.iter().zip(&theta).map(|(n, o)| n - o).collect();
            if dot(&g, &step) > 0.0 {
                // momentum points uphill: restart from the current iterate
                look = theta.clone();
                t = 1.0;
                continue;
            }
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            let beta = (t - 1.0) / t_next;
            look = next.iter().zip(&step).map(|(&n, &d)| n + beta * d).collect();
            theta = next;
            t = t_next;
            lip *= 0.9;
        }
        Err(EvalError::NonConvergence {
            iterations: LOGREG_MAX_ITER,
            grad_norm,
        })
    }

    fn from_theta(mut theta: Vec<f64>, iterations: usize) -> Self {
        let intercept = theta.pop().unwrap_or(0.0);
        LogisticRegression {
            weights: theta,
            intercept,
            iterations,
        }
    }

    /// Positive-class probabilities.
    pub fn predict_proba(&self, x: &Matrix) -> Vec<f64> {
        x.row_iter()
            .map(|r| sigmoid(dot(r, &self.weights) + self.intercept))
            .collect()
    }

    /// Regularised objective gradient at the stored parameters.
    pub fn objective_gradient(&self, x: &Matrix, y: &[f64], lambda: f64) -> Vec<f64> {
        let mut theta = self.weights.clone();
        theta.push(self.intercept);
        Problem { x, y, lambda }.gradient(&theta)
    }

    /// All parameters, weights first.
    pub fn parameters(&self) -> Vec<f64> {
        let mut v = self.weights.clone();
        v.push(self.intercept);
        v
    }
}
