//! Train GAIN on the bundled breast-cancer table with 20% of cells hidden
//! and report how often the hidden categories are recovered.
//!
//! ```text
//! cargo run --release --example train_gain -- [epochs]
//! ```

use std::path::Path;

use catgain::codec::encode_dataset;
use catgain::eval::{mask_dataset, MaskingPlan};
use catgain::gain::{impute, train, GainModel, GainParams, TrainConfig};
use catgain::io::{read_schema, read_table_file};
use catgain::rng::Seed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let epochs: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(100);
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let schema = read_schema(&dir.join("breast-cancer.schema"))?;
    let table = read_table_file(&dir.join("breast-cancer.csv"), &schema, Some("recurrence"))?;
    let seed = Seed(1);
    let full = encode_dataset(&table.records, &schema, &mut seed.stream("fuzzify"))?;
    let (data, hidden) = mask_dataset(&full, &MaskingPlan { proportion: 0.2, seed });

    let mut model = GainModel::new(schema.clone(), GainParams::default(), &mut seed.stream("init"))?;
    let trace = train(&mut model, &data, &TrainConfig { epochs, seed, ..TrainConfig::default() })?;
    for (e, l) in trace.epochs.iter().enumerate().filter(|(e, _)| e % 10 == 0 || *e + 1 == epochs) {
        println!("epoch {e:>4}  loss_d {:.4}  loss_g {:.4}  loss_sim {:.4}", l.loss_d, l.loss_g, l.loss_sim);
    }

    let result = impute(&model, &data, 1, seed.derive("impute", &[]))?;
    let hits = hidden
        .iter()
        .filter(|c| result.completions[0][c.row].cells[c.feature] == c.truth)
        .count();
    println!("recovered {hits} of {} hidden cells", hidden.len());
    Ok(())
}
