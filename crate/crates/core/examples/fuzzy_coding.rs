//! Binary and fuzzy codes of one mixed record, and the decode back.

use catgain::codec::{decode, encode_binary, fuzzify_block, Cell, FeatureSchema, FeatureSpec, RawRecord};
use catgain::rng::Seed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let schema = FeatureSchema::new(vec![
        FeatureSpec::multiclass("colour", 3),
        FeatureSpec::multilabel("tags", 2),
        FeatureSpec::multiclass("size", 4),
    ])?;
    let record = RawRecord::new(vec![Cell::Class(1), Cell::labels([0, 1]), Cell::Missing]);
    let (z, mu) = encode_binary(&record, &schema)?;
    println!("binary  {z:?}");
    println!("mu      {mu:?}");

    let mut rng = Seed(7).stream("fuzzify");
    for (j, (spec, block)) in schema.blocks().enumerate() {
        if mu[j] == 0.0 {
            println!("{:<7} missing", spec.name);
            continue;
        }
        let fuzzy = fuzzify_block(spec, &z[block], &mut rng)?;
        let shown: Vec<String> = fuzzy.iter().map(|v| format!("{v:.3}")).collect();
        println!("{:<7} fuzzy [{}] decodes to {:?}", spec.name, shown.join(", "), decode(&fuzzy, spec));
    }
    Ok(())
}
