use rand::Rng;
use serde::{Deserialize, Serialize};

use super::GainError;
use crate::codec::{Coding, FeatureKind, FeatureSchema};
use crate::linalg::Matrix;
use crate::nn::{Activation, DenseLayer, HeadBlock, HeadKind, Mlp};

/// Architecture and objective hyperparameters carried by a [`GainModel`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GainParams {
    /// Generator hidden widths; `None` means `2Q` for all three.
    pub generator_hidden: Option<[usize; 3]>,
    /// Discriminator hidden widths; `None` means `2Q` for both.
    pub discriminator_hidden: Option<[usize; 2]>,
    /// Fraction of features whose hint block is neutralised to 0.5.
    pub hint_rate: f64,
    /// Weight of the similarity loss in the generator objective.
    pub lambda_sim: f64,
    /// Uniform bounds of the generator seeds.
    pub seed_low: f64,
    pub seed_high: f64,
    /// Representation of observed blocks the model consumes.
    pub coding: Coding,
}

impl Default for GainParams {
    fn default() -> Self {
        GainParams {
            generator_hidden: None,
            discriminator_hidden: None,
            hint_rate: 0.1,
            lambda_sim: 1.0,
            seed_low: 0.0,
            seed_high: 1.0,
            coding: Coding::Fuzzy,
        }
    }
}

impl GainParams {
    pub fn validate(&self) -> Result<(), GainError> {
        let bad = |m: &str| Err(GainError::InvalidConfig(m.into()));
        if !(0.0..=1.0).contains(&self.hint_rate) {
            return bad("hint_rate must lie in [0, 1]");
        }
        if !(self.lambda_sim >= 0.0 && self.lambda_sim.is_finite()) {
            return bad("lambda_sim must be finite and non-negative");
        }
        if !(0.0 <= self.seed_low && self.seed_low <= self.seed_high && self.seed_high <= 1.0) {
            return bad("seed bounds must satisfy 0 <= low <= high <= 1");
        }
        let zero_width = self.generator_hidden.is_some_and(|h| h.contains(&0))
            || self.discriminator_hidden.is_some_and(|h| h.contains(&0));
        if zero_width {
            return bad("hidden widths must be positive");
        }
        Ok(())
    }
}

/// Output activation of the generator: one head per feature block.
pub(crate) fn generator_heads(schema: &FeatureSchema) -> Activation {
    Activation::Heads(
        schema
            .blocks()
            .map(|(spec, block)| HeadBlock {
                offset: block.start,
                width: block.len(),
                kind: match spec.kind {
                    FeatureKind::Multiclass => HeadKind::Softmax,
                    FeatureKind::Multilabel | FeatureKind::Numeric => HeadKind::Sigmoid,
                },
            })
            .collect(),
    )
}

/// Generator input `[x̄∘m̄ + (1−m̄)∘r̄, m̄]` for a batch.
pub fn generator_input(x: &Matrix, mask: &Matrix, seeds: &Matrix) -> Matrix {
    assert_eq!(x.shape(), mask.shape());
    assert_eq!(x.shape(), seeds.shape());
    let mut filled = x.clone();
    for ((f, &m), &r) in filled
        .as_mut_slice()
        .iter_mut()
        .zip(mask.as_slice())
        .zip(seeds.as_slice())
    {
        *f = m * *f + (1.0 - m) * r;
    }
    filled.hstack(mask)
}

/// `m̄∘x̄ + (1−m̄)∘g`: observed blocks replaced by the real values.
pub(crate) fn pass_through(x: &Matrix, mask: &Matrix, raw: &Matrix) -> Matrix {
    let mut out = raw.clone();
    for ((o, &m), &v) in out
        .as_mut_slice()
        .iter_mut()
        .zip(mask.as_slice())
        .zip(x.as_slice())
    {
        if m == 1.0 {
            *o = v;
        } else {
            *o = m * v + (1.0 - m) * *o;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct GainModel {
    schema: FeatureSchema,
    params: GainParams,
    pub generator: Mlp,
    pub discriminator: Mlp,
}

impl GainModel {
    /// Glorot-initialised generator (`2Q → h1 → h2 → h3 → Q`, relu hidden,
    /// per-feature heads) and discriminator (`2Q → d1 → d2 → p`, relu hidden,
    /// sigmoid outputs).
    pub fn new<R: Rng + ?Sized>(
        schema: FeatureSchema,
        params: GainParams,
        rng: &mut R,
    ) -> Result<Self, GainError> {
        params.validate()?;
        let q = schema.width();
        let p = schema.len();
        let [h1, h2, h3] = params.generator_hidden.unwrap_or([2 * q; 3]);
        let [d1, d2] = params.discriminator_hidden.unwrap_or([2 * q; 2]);
        let generator = Mlp::glorot(
            &[2 * q, h1, h2, h3, q],
            Activation::Relu,
            generator_heads(&schema),
            rng,
        )?;
        let discriminator = Mlp::glorot(&[2 * q, d1, d2, p], Activation::Relu, Activation::Sigmoid, rng)?;
        Ok(GainModel {
            schema,
            params,
            generator,
            discriminator,
        })
    }

    /// Same architecture with every weight and bias set to zero.
    pub fn zeros(schema: FeatureSchema, params: GainParams) -> Result<Self, GainError> {
        params.validate()?;
        let q = schema.width();
        let p = schema.len();
        let [h1, h2, h3] = params.generator_hidden.unwrap_or([2 * q; 3]);
        let [d1, d2] = params.discriminator_hidden.unwrap_or([2 * q; 2]);
        let generator = Mlp::new(vec![
            DenseLayer::zeros(2 * q, h1, Activation::Relu),
            DenseLayer::zeros(h1, h2, Activation::Relu),
            DenseLayer::zeros(h2, h3, Activation::Relu),
            DenseLayer::zeros(h3, q, generator_heads(&schema)),
        ])?;
        let discriminator = Mlp::new(vec![
            DenseLayer::zeros(2 * q, d1, Activation::Relu),
            DenseLayer::zeros(d1, d2, Activation::Relu),
            DenseLayer::zeros(d2, p, Activation::Sigmoid),
        ])?;
        Ok(GainModel {
            schema,
            params,
            generator,
            discriminator,
        })
    }

    /// Reassembles a model from stored networks, checking their shapes.
    pub fn from_parts(
        schema: FeatureSchema,
        params: GainParams,
        generator: Mlp,
        discriminator: Mlp,
    ) -> Result<Self, GainError> {
        params.validate()?;
        let (q, p) = (schema.width(), schema.len());
        let ok = generator.input_width() == 2 * q
            && generator.output_width() == q
            && discriminator.input_width() == 2 * q
            && discriminator.output_width() == p
            && generator.layers().last().map(|l| &l.activation) == Some(&generator_heads(&schema));
        if !ok {
            return Err(GainError::SchemaMismatch);
        }
        Ok(GainModel {
            schema,
            params,
            generator,
            discriminator,
        })
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn params(&self) -> &GainParams {
        &self.params
    }

    fn check_width(&self, m: &Matrix, context: &'static str) -> Result<(), GainError> {
        if m.cols() != self.schema.width() {
            return Err(crate::nn::NnError::DimensionMismatch {
                context,
                expected: self.schema.width(),
                got: m.cols(),
            }
            .into());
        }
        Ok(())
    }

    /// Batch generator pass. Returns the raw head outputs and the pass-through
    /// combination `ḡ`.
    pub fn generate(&self, x: &Matrix, mask: &Matrix, seeds: &Matrix) -> Result<(Matrix, Matrix), GainError> {
        self.check_width(x, "generator values")?;
        self.check_width(mask, "generator mask")?;
        self.check_width(seeds, "generator seeds")?;
        let raw = self.generator.predict(&generator_input(x, mask, seeds))?;
        let combined = pass_through(x, mask, &raw);
        Ok((raw, combined))
    }

    /// Single-row generator pass returning `ḡ`.
    pub fn generator_forward(&self, x: &[f64], mask: &[f64], seeds: &[f64]) -> Result<Vec<f64>, GainError> {
        let q = x.len();
        let (_, g) = self.generate(
            &Matrix::from_vec(1, q, x.to_vec()),
            &Matrix::from_vec(1, mask.len(), mask.to_vec()),
            &Matrix::from_vec(1, seeds.len(), seeds.to_vec()),
        )?;
        Ok(g.into_vec())
    }

    /// Batch discriminator pass: `μ̂ = D([ḡ, h̄])`, one probability per feature.
    pub fn discriminate(&self, g: &Matrix, hints: &Matrix) -> Result<Matrix, GainError> {
        self.check_width(g, "discriminator values")?;
        self.check_width(hints, "discriminator hints")?;
        Ok(self.discriminator.predict(&g.hstack(hints))?)
    }

    pub fn discriminator_forward(&self, g: &[f64], hints: &[f64]) -> Result<Vec<f64>, GainError> {
        let out = self.discriminate(
            &Matrix::from_vec(1, g.len(), g.to_vec()),
            &Matrix::from_vec(1, hints.len(), hints.to_vec()),
        )?;
        Ok(out.into_vec())
    }
}
