//! Auto-encoder imputation at a few bottleneck widths.

use catgain::baselines::{AutoencoderConfig, AutoencoderImputer};
use catgain::codec::{decode, encode_dataset, Cell, RawRecord};
use catgain::rng::Seed;
use catgain::synthetic::dependent_corpus;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (schema, records) = dependent_corpus(600, 8, 0.05, Seed(2));
    let (train_recs, truth) = records.split_at(500);
    let test_recs: Vec<RawRecord> = truth
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.cells[i % 8] = Cell::Missing;
            r
        })
        .collect();
    let train = encode_dataset(train_recs, &schema, &mut Seed(3).stream("f"))?;
    let test = encode_dataset(&test_recs, &schema, &mut Seed(4).stream("f"))?;

    for rank in [2, 4, 8] {
        let config = AutoencoderConfig { epochs: 200, seed: Seed(5), ..AutoencoderConfig::default() };
        let ae = AutoencoderImputer::fit(&train, rank, &config)?;
        let out = ae.impute(&test)?;
        let hits = (0..truth.len())
            .filter(|&i| {
                let j = i % 8;
                decode(&out.row(i)[schema.block(j)], schema.feature(j)) == truth[i].cells[j]
            })
            .count();
        println!(
            "rank {rank}: final loss {:.4}, recovered {hits}/{} hidden cells",
            ae.losses().last().copied().unwrap_or(f64::NAN),
            truth.len()
        );
    }
    Ok(())
}
