//! Truncated-SVD imputation: singular values of the training codes and the
//! share of hidden test cells recovered at several ranks.

use catgain::baselines::{svd, SvdImputer};
use catgain::codec::{decode, encode_dataset, Cell, FeatureSchema, FeatureSpec, RawRecord};
use catgain::rng::Seed;
use rand::Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let schema = FeatureSchema::new((0..5).map(|j| FeatureSpec::multiclass(format!("f{j}"), 3)).collect())?;
    let mut rng = Seed(4).stream("rows");
    let mut row = || {
        let z: usize = rng.gen_range(0..3);
        RawRecord::new((0..5).map(|j| Cell::Class((z + j) % 3)).collect())
    };
    let train_recs: Vec<RawRecord> = (0..200).map(|_| row()).collect();
    let truth: Vec<RawRecord> = (0..50).map(|_| row()).collect();
    let hidden: Vec<usize> = (0..truth.len()).map(|i| i % 5).collect();
    let test_recs: Vec<RawRecord> = truth
        .iter()
        .zip(&hidden)
        .map(|(r, &j)| {
            let mut r = r.clone();
            r.cells[j] = Cell::Missing;
            r
        })
        .collect();
    let train = encode_dataset(&train_recs, &schema, &mut Seed(5).stream("f"))?;
    let test = encode_dataset(&test_recs, &schema, &mut Seed(6).stream("f"))?;

    let s = svd(train.binary())?.s;
    let shown: Vec<String> = s.iter().map(|v| format!("{v:.2}")).collect();
    println!("singular values: {}", shown.join(" "));

    for rank in [1, 2, 3, 6] {
        let out = SvdImputer::fit(&train, rank)?.impute_test(&test)?;
        let hits = hidden
            .iter()
            .enumerate()
            .filter(|&(i, &j)| decode(&out.row(i)[schema.block(j)], schema.feature(j)) == truth[i].cells[j])
            .count();
        println!("rank {rank}: recovered {hits}/{} hidden cells", hidden.len());
    }
    Ok(())
}
