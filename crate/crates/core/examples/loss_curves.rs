//! Adversarial losses under fuzzy versus hard-binary coding on a synthetic
//! corpus of dependent categorical features.
//!
//! ```text
//! cargo run --release --example loss_curves -- [seeds] [epochs]
//! ```

use catgain::codec::{encode_dataset, Coding};
use catgain::eval::{mask_dataset, MaskingPlan};
use catgain::gain::{train, GainError, GainModel, GainParams, TrainConfig};
use catgain::rng::Seed;
use catgain::synthetic::dependent_corpus;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seeds: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5);
    let epochs: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(200);

    for s in 0..seeds {
        let seed = Seed(s);
        let (schema, records) = dependent_corpus(1000, 15, 0.1, seed);
        let full = encode_dataset(&records, &schema, &mut seed.stream("fuzzify"))?;
        let (data, _) = mask_dataset(&full, &MaskingPlan { proportion: 0.2, seed });
        for coding in [Coding::HardBinary, Coding::Fuzzy] {
            let params = GainParams { coding, ..GainParams::default() };
            let mut model = GainModel::new(schema.clone(), params, &mut seed.stream("init"))?;
            let config = TrainConfig { epochs, seed, ..TrainConfig::default() };
            let trace = match train(&mut model, &data, &config) {
                Ok(t) => t,
                Err(GainError::Divergence { trace, epoch }) => {
                    println!("seed {s} {coding:?}: diverged at epoch {epoch}");
                    trace
                }
                Err(e) => return Err(e.into()),
            };
            let at = |e: usize| trace.epochs.get(e.min(trace.len().saturating_sub(1))).copied();
            if let (Some(early), Some(late)) = (at(4), at(epochs - 1)) {
                println!(
                    "seed {s} {:<10} loss_d {:.4} -> {:.4}   loss_g {:.4} -> {:.4}   loss_sim {:.4} -> {:.4}",
                    format!("{coding:?}"),
                    early.loss_d, late.loss_d, early.loss_g, late.loss_g, early.loss_sim, late.loss_sim
                );
            }
        }
    }
    Ok(())
}
