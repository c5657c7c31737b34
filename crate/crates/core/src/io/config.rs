use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::baselines::AutoencoderConfig;
use crate::codec::Coding;
use crate::eval::{Aggregation, BenchmarkConfig, Method};
use crate::gain::{GainParams, TrainConfig};
use crate::nn::AdamConfig;
use crate::rng::Seed;

/// Flat run configuration shared by all commands, read from TOML. Unknown
/// keys are rejected; command-line flags override file values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema: Option<PathBuf>,
    pub data: Option<PathBuf>,
    /// Name of the binary target column.
    pub label: Option<String>,
    /// Label value treated as positive; defaults to the second in sorted order.
    pub positive_label: Option<String>,
    /// Trained model to load instead of training (`impute`).
    pub model: Option<PathBuf>,
    pub output: PathBuf,
    pub methods: Vec<Method>,
    pub proportions: Vec<f64>,
    pub folds: usize,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub hint_rate: f64,
    pub lambda_sim: f64,
    pub coding: Coding,
    pub refuzzify_each_epoch: bool,
    pub ranks: Vec<usize>,
    pub ridge_lambda: f64,
    /// Multiple-imputation draws.
    pub k: usize,
    pub aggregation: Aggregation,
    pub ae_epochs: usize,
    pub seed: u64,
    /// Maximum concurrently evaluated benchmark cells; 0 means all cores.
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema: None,
            data: None,
            label: None,
            positive_label: None,
            model: None,
            output: PathBuf::from("out"),
            methods: Method::ALL.to_vec(),
            proportions: vec![0.1, 0.2, 0.3, 0.4, 0.5],
            folds: 5,
            epochs: 500,
            batch_size: 64,
            learning_rate: AdamConfig::default().learning_rate,
            hint_rate: 0.1,
            lambda_sim: 1.0,
            coding: Coding::Fuzzy,
            refuzzify_each_epoch: false,
            ranks: vec![4, 8, 16, 32],
            ridge_lambda: 10.0,
            k: 100,
            aggregation: Aggregation::PerDraw,
            ae_epochs: 500,
            seed: 0,
            jobs: 0,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, IoError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| IoError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path).map_err(|e| IoError::file(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serialises")
    }

    /// Range checks shared by every command.
    pub fn validate(&self) -> Result<(), IoError> {
        let bad = |m: String| Err(IoError::Config(m));
        if self.batch_size == 0 {
            return bad("batch_size must be at least 1".into());
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning_rate {} must be positive", self.learning_rate));
        }
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if self.folds < 2 {
            return bad("folds must be at least 2".into());
        }
        if let Some(p) = self.proportions.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return bad(format!("proportion {p} outside [0, 1]"));
        }
        if self.ranks.contains(&0) {
            return bad("ranks must be positive".into());
        }
        if !(self.ridge_lambda >= 0.0 && self.ridge_lambda.is_finite()) {
            return bad(format!("ridge_lambda {} must be non-negative", self.ridge_lambda));
        }
        self.gain_params().validate().map_err(|e| IoError::Config(e.to_string()))?;
        Ok(())
    }

    pub fn require_schema(&self) -> Result<&Path, IoError> {
        self.schema.as_deref().ok_or(IoError::Usage("a schema path is required".into()))
    }

    pub fn require_data(&self) -> Result<&Path, IoError> {
        self.data.as_deref().ok_or(IoError::Usage("a data path is required".into()))
    }

    pub fn master_seed(&self) -> Seed {
        Seed(self.seed)
    }

    pub fn gain_params(&self) -> GainParams {
        GainParams {
            hint_rate: self.hint_rate,
            lambda_sim: self.lambda_sim,
            coding: self.coding,
            ..GainParams::default()
        }
    }

    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            ..AdamConfig::default()
        }
    }

    pub fn train_config(&self, seed: Seed) -> TrainConfig {
        TrainConfig {
            epochs: self.epochs,
            batch_size: self.batch_size,
            adam: self.adam(),
            refuzzify_each_epoch: self.refuzzify_each_epoch,
            seed,
        }
    }

    pub fn benchmark_config(&self) -> BenchmarkConfig {
        BenchmarkConfig {
            folds: self.folds,
            proportions: self.proportions.clone(),
            methods: self.methods.clone(),
            ranks: self.ranks.clone(),
            ridge_lambda: self.ridge_lambda,
            draws: self.k,
            aggregation: self.aggregation,
            gain: self.gain_params(),
            train: self.train_config(Seed(0)),
            autoencoder: AutoencoderConfig {
                epochs: self.ae_epochs,
                batch_size: self.batch_size,
                adam: self.adam(),
                seed: Seed(0),
            },
            seed: self.master_seed(),
        }
    }

    /// Worker count for the benchmark, resolving 0 to the available cores.
    pub fn resolved_jobs(&self) -> usize {
        if self.jobs > 0 {
            self.jobs
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }
    }
}
