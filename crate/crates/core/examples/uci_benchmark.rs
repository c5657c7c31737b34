//! Cross-validated benchmark of every method on the bundled breast-cancer
//! table. GAIN and the auto-encoder use short schedules here so the example
//! finishes quickly; pass `full` for the default schedules.

use std::path::Path;

use catgain::baselines::AutoencoderConfig;
use catgain::codec::encode_dataset;
use catgain::eval::{run_benchmark, BenchmarkConfig};
use catgain::gain::TrainConfig;
use catgain::io::{binarize_labels, read_schema, read_table_file};
use catgain::rng::Seed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let full = std::env::args().nth(1).as_deref() == Some("full");
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let schema = read_schema(&dir.join("breast-cancer.schema"))?;
    let table = read_table_file(&dir.join("breast-cancer.csv"), &schema, Some("recurrence"))?;
    let (labels, positive) = binarize_labels(table.labels.as_deref().unwrap_or_default(), None)?;
    let data = encode_dataset(&table.records, &schema, &mut Seed(0).stream("fuzzify"))?;

    let mut config = BenchmarkConfig { proportions: vec![0.1, 0.3, 0.5], ..BenchmarkConfig::default() };
    if !full {
        config.train = TrainConfig { epochs: 50, ..TrainConfig::default() };
        config.autoencoder = AutoencoderConfig { epochs: 50, ..AutoencoderConfig::default() };
        config.draws = 10;
    }
    let report = run_benchmark(&data, &labels, &config)?;
    println!("positive class `{positive}`, {} rows", data.n_rows());
    for r in report.rows.iter().filter(|r| r.metric == "auroc") {
        match (r.mean, r.sd) {
            (Some(m), Some(s)) => println!("{:>4} {:<14} auroc {m:.3} ± {s:.3}", r.proportion, r.method),
            _ => println!("{:>4} {:<14} failed", r.proportion, r.method),
        }
    }
    Ok(())
}
