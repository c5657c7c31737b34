//! Multiple imputation: k draws per missing cell and their agreement.

use catgain::codec::{encode_dataset, Cell, FeatureSchema, FeatureSpec, RawRecord};
use catgain::gain::{impute, train, GainModel, GainParams, TrainConfig};
use catgain::rng::Seed;
use rand::Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let schema = FeatureSchema::new(vec![
        FeatureSpec::multiclass("a", 3),
        FeatureSpec::multiclass("b", 3),
        FeatureSpec::multilabel("c", 2),
    ])?;
    let mut rng = Seed(0).stream("rows");
    // b copies a; c flags a == 0
    let records: Vec<RawRecord> = (0..300)
        .map(|i| {
            let a = rng.gen_range(0..3);
            let b = if i % 5 == 0 { Cell::Missing } else { Cell::Class(a) };
            RawRecord::new(vec![Cell::Class(a), b, Cell::labels(if a == 0 { vec![0] } else { vec![1] })])
        })
        .collect();
    let data = encode_dataset(&records, &schema, &mut Seed(1).stream("fuzzify"))?;
    let mut model = GainModel::new(schema, GainParams::default(), &mut Seed(2).stream("init"))?;
    train(&mut model, &data, &TrainConfig { epochs: 10, ..TrainConfig::default() })?;

    let result = impute(&model, &data, 25, Seed(3))?;
    for a in result.agreement.iter().take(8) {
        println!(
            "row {:>3} feature {}  a = {:?}  modal {:?}  agreement {:.2}",
            a.row, a.feature, records[a.row].cells[0], a.modal, a.frequency
        );
    }
    let mean = result.agreement.iter().map(|a| a.frequency).sum::<f64>() / result.agreement.len() as f64;
    println!("{} draws, mean agreement {mean:.3}", result.draws());
    Ok(())
}
