use serde::{Deserialize, Serialize};

use super::{Mlp, MlpGrads, NnError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Adam with bias-corrected moments. Moment buffers are created on the first
/// step and mirror the parameter slices from then on.
#[derive(Clone, Debug)]
pub struct Adam {
    config: AdamConfig,
    step: u64,
    first: Vec<Vec<f64>>,
    second: Vec<Vec<f64>>,
}

impl Adam {
    pub fn new(config: AdamConfig) -> Self {
        Adam {
            config,
            step: 0,
            first: Vec::new(),
            second: Vec::new(),
        }
    }

    pub fn steps(&self) -> u64 {
        self.step
    }

    pub fn config(&self) -> &AdamConfig {
        &self.config
    }

    pub fn step_mlp(&mut self, mlp: &mut Mlp, grads: &MlpGrads) -> Result<(), NnError> {
        let g = grads.slices();
        self.step_slices(&mut mlp.param_slices_mut(), &g)
    }

    /// One update over a fixed list of parameter tensors. Fails without
    /// touching anything if a gradient is NaN or infinite.
    pub fn step_slices(&mut self, params: &mut [&mut [f64]], grads: &[&[f64]]) -> Result<(), NnError> {
        if params.len() != grads.len() {
            return Err(NnError::DimensionMismatch {
                context: "optimizer tensors",
                expected: params.len(),
                got: grads.len(),
            });
        }
        for (p, g) in params.iter().zip(grads) {
            if p.len() != g.len() {
                return Err(NnError::DimensionMismatch {
                    context: "optimizer tensor",
                    expected: p.len(),
                    got: g.len(),
                });
            }
        }
        if grads.iter().any(|g| g.iter().any(|v| !v.is_finite())) {
            return Err(NnError::NonFinite("gradients"));
        }
        if self.first.is_empty() {
            self.first = grads.iter().map(|g| vec![0.0; g.len()]).collect();
            self.second = self.first.clone();
        } else if self.first.len() != grads.len()
            || self.first.iter().zip(grads).any(|(m, g)| m.len() != g.len())
        {
            return Err(NnError::InvalidArchitecture(
                "parameter shapes changed between optimizer steps".into(),
            ));
        }
        self.step += 1;
        let AdamConfig {
            learning_rate,
            beta1,
            beta2,
            epsilon,
        } = self.config;
        let c1 = 1.0 - beta1.powi(self.step as i32);
        let c2 = 1.0 - beta2.powi(self.step as i32);
        for (t, (p, g)) in params.iter_mut().zip(grads).enumerate() {
            let (m, v) = (&mut self.first[t], &mut self.second[t]);
            for k in 0..g.len() {
                m[k] = beta1 * m[k] + (1.0 - beta1) * g[k];
                v[k] = beta2 * v[k] + (1.0 - beta2) * g[k] * g[k];
                let m_hat = m[k] / c1;
                let v_hat = v[k] / c2;
                p[k] -= learning_rate * m_hat / (v_hat.sqrt() + epsilon);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_parameters() {
        let mut adam = Adam::new(AdamConfig::default());
        let mut w = vec![1.0, -2.0];
        for _ in 0..10 {
            adam.step_slices(&mut [&mut w], &[&[0.0, 0.0]]).unwrap();
        }
        assert_eq!(w, vec![1.0, -2.0]);
    }

    #[test]
    fn minimises_one_dimensional_quadratic() {
        // f(w) = w², ∇f = 2w
        let mut adam = Adam::new(AdamConfig {
            learning_rate: 0.01,
            ..AdamConfig::default()
        });
        let mut w = [1.0];
        let mut trace = Vec::new();
        for _ in 0..500 {
            let g = [2.0 * w[0]];
            adam.step_slices(&mut [&mut w], &[&g]).unwrap();
            trace.push(w[0] * w[0]);
        }
        assert!(w[0].abs() < 0.01, "w = {}", w[0]);
        // loss decreases monotonically until the iterate first gets close to 0
        let settle = trace.iter().position(|&f| f < 1e-3).unwrap();
        assert!(trace[..settle].windows(2).all(|p| p[1] < p[0]));
    }

    #[test]
    fn rejects_non_finite_gradients() {
        let mut adam = Adam::new(AdamConfig::default());
        let mut w = vec![1.0];
        assert!(matches!(
            adam.step_slices(&mut [&mut w], &[&[f64::NAN]]),
            Err(NnError::NonFinite(_))
        ));
        assert_eq!(w, vec![1.0]);
        assert_eq!(adam.steps(), 0);
    }

    #[test]
    fn identical_runs_are_bitwise_identical() {
        let run = || {
            let mut adam = Adam::new(AdamConfig::default());
            let mut w = vec![0.3, -0.7, 1.1];
            for s in 0..100 {
                let g: Vec<f64> = w.iter().map(|x: &f64| x.sin() + s as f64 * 1e-3).collect();
                adam.step_slices(&mut [&mut w], &[&g]).unwrap();
            }
            w
        };
        let (a, b) = (run(), run());
        assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}
