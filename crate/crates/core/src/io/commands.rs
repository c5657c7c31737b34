use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::manifest::Manifest;
use super::schema_file::read_schema;
use super::table::{binarize_labels, read_table_file, write_table, Table};
use super::{IoError, RunConfig};
use crate::codec::{encode_dataset, Cell, Coding, FeatureKind, FeatureSchema, FuzzyDataset};
use crate::eval::{mask_dataset, run_benchmark_with_jobs};
use crate::gain::{impute, train, GainError, GainModel, GainParams, TrainConfig, TrainTrace};
use crate::nn::persist::{read_model, write_model, ModelFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Impute,
    Benchmark,
    Losses,
    Train,
    InspectSchema,
}

/// What a command produced.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CommandOutcome {
    pub files: Vec<PathBuf>,
    /// Benchmark cells that failed.
    pub cell_errors: usize,
    /// Human-readable summary for the terminal.
    pub summary: String,
}

/// Schema, raw table and coded dataset of a run.
pub struct LoadedData {
    pub schema: FeatureSchema,
    pub table: Table,
    pub dataset: FuzzyDataset,
}

impl LoadedData {
    pub fn load(config: &RunConfig) -> Result<Self, IoError> {
        let schema = read_schema(config.require_schema()?)?;
        let table = read_table_file(config.require_data()?, &schema, config.label.as_deref())?;
        let dataset = encode_dataset(&table.records, &schema, &mut config.master_seed().stream("fuzzify"))?;
        Ok(LoadedData { schema, table, dataset })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelHeader {
    params: GainParams,
    train: TrainConfig,
}

pub fn save_model(path: &Path, model: &GainModel, train: &TrainConfig) -> Result<(), IoError> {
    let header = serde_json::to_string(&ModelHeader {
        params: model.params().clone(),
        train: train.clone(),
    })
    .map_err(|e| IoError::Manifest(e.to_string()))?;
    let file = ModelFile {
        schema_hash: model.schema().hash(),
        header,
        networks: vec![model.generator.clone(), model.discriminator.clone()],
    };
    let mut w = BufWriter::new(File::create(path).map_err(|e| IoError::file(path, e))?);
    write_model(&mut w, &file)?;
    w.flush()?;
    Ok(())
}

pub fn load_model(path: &Path, schema: &FeatureSchema) -> Result<GainModel, IoError> {
    let mut f = File::open(path).map_err(|e| IoError::file(path, e))?;
    let file = read_model(&mut f, Some(&schema.hash()))?;
    let header: ModelHeader =
        serde_json::from_str(&file.header).map_err(|e| IoError::Manifest(format!("model header: {e}")))?;
    let mut nets = file.networks.into_iter();
    match (nets.next(), nets.next(), nets.next()) {
        (Some(g), Some(d), None) => Ok(GainModel::from_parts(schema.clone(), header.params, g, d)?),
        _ => Err(IoError::Manifest("model file must hold exactly two networks".into())),
    }
}

/// `epoch,loss_d,loss_g,loss_sim`; a diverged run ends with a NaN row.
pub fn write_trace<W: Write>(w: W, trace: &TrainTrace, diverged: bool) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["epoch", "loss_d", "loss_g", "loss_sim"])?;
    for (e, l) in trace.epochs.iter().enumerate() {
        w.write_record([(e + 1).to_string(), l.loss_d.to_string(), l.loss_g.to_string(), l.loss_sim.to_string()])?;
    }
    if diverged {
        w.write_record([(trace.len() + 1).to_string(), "NaN".into(), "NaN".into(), "NaN".into()])?;
    }
    w.flush()?;
    Ok(())
}

fn create_dir(dir: &Path) -> Result<(), IoError> {
    std::fs::create_dir_all(dir).map_err(|e| IoError::file(dir, e))
}

fn create(path: &Path) -> Result<BufWriter<File>, IoError> {
    Ok(BufWriter::new(File::create(path).map_err(|e| IoError::file(path, e))?))
}

fn train_model(config: &RunConfig, data: &FuzzyDataset) -> Result<(GainModel, TrainConfig, TrainTrace), IoError> {
    let seed = config.master_seed();
    let mut model = GainModel::new(data.schema().clone(), config.gain_params(), &mut seed.stream("init"))?;
    let tc = config.train_config(seed.derive("train", &[]));
    let trace = train(&mut model, data, &tc)?;
    Ok((model, tc, trace))
}

/// Trains a model on the data file and writes `model.bin` and `trace.csv`.
pub fn cmd_train(config: &RunConfig) -> Result<CommandOutcome, IoError> {
    config.validate()?;
    let data = LoadedData::load(config)?;
    create_dir(&config.output)?;
    let (model, tc, trace) = train_model(config, &data.dataset)?;
    let model_path = config.output.join("model.bin");
    save_model(&model_path, &model, &tc)?;
    let trace_path = config.output.join("trace.csv");
    write_trace(create(&trace_path)?, &trace, false)?;
    let last = trace.epochs.last();
    Ok(CommandOutcome {
        files: vec![model_path, trace_path],
        cell_errors: 0,
        summary: format!(
            "trained {} epochs on {} rows; final loss_d {:.4}, loss_g {:.4}, loss_sim {:.4}",
            trace.len(),
            data.dataset.n_rows(),
            last.map_or(f64::NAN, |l| l.loss_d),
            last.map_or(f64::NAN, |l| l.loss_g),
            last.map_or(f64::NAN, |l| l.loss_sim),
        ),
    })
}

/// Writes `k` completed copies of the data file plus `agreement.csv`. The
/// model comes from `config.model` or is trained on the data first.
pub fn cmd_impute(config: &RunConfig) -> Result<CommandOutcome, IoError> {
    config.validate()?;
    let data = LoadedData::load(config)?;
    create_dir(&config.output)?;
    let mut files = Vec::new();
    let model = match &config.model {
        Some(path) => load_model(path, &data.schema)?,
        None => {
            let (model, tc, _) = train_model(config, &data.dataset)?;
            let path = config.output.join("model.bin");
            save_model(&path, &model, &tc)?;
            files.push(path);
            model
        }
    };
    let result = impute(&model, &data.dataset, config.k, config.master_seed().derive("impute", &[]))?;
    let width = config.k.to_string().len();
    let labels = match (&config.label, &data.table.labels) {
        (Some(name), Some(l)) => Some((name.as_str(), l.as_slice())),
        _ => None,
    };
    for (d, completion) in result.completions.iter().enumerate() {
        let path = config.output.join(format!("completion_{:0width$}.csv", d + 1));
        let mut w = create(&path)?;
        write_table(&mut w, &data.schema, completion, labels)?;
        w.flush()?;
        files.push(path);
    }
    let path = config.output.join("agreement.csv");
    {
        let mut w = csv::Writer::from_writer(create(&path)?);
        w.write_record(["row", "feature", "modal", "frequency"])?;
        for a in &result.agreement {
            let spec = data.schema.feature(a.feature);
            let modal = match &a.modal {
                Cell::Class(c) => spec.labels[*c].clone(),
                Cell::Labels(l) if spec.kind == FeatureKind::Multilabel => {
                    if l.is_empty() {
                        "|".to_string()
                    } else {
                        l.iter().map(|&k| spec.labels[k].as_str()).collect::<Vec<_>>().join("|")
                    }
                }
                Cell::Numeric(v) => v.to_string(),
                other => format!("{other:?}"),
            };
            w.write_record([(a.row + 1).to_string(), spec.name.clone(), modal, a.frequency.to_string()])?;
        }
        w.flush()?;
    }
    files.push(path);
    Ok(CommandOutcome {
        files,
        cell_errors: 0,
        summary: format!(
            "{} completions of {} rows; {} missing cells imputed",
            config.k,
            data.dataset.n_rows(),
            result.agreement.len()
        ),
    })
}

/// Cross-validated benchmark; writes `report.csv` and `report.json`.
pub fn cmd_benchmark(config: &RunConfig) -> Result<CommandOutcome, IoError> {
    if config.methods.is_empty() {
        return Err(IoError::Usage("at least one method is required".into()));
    }
    if config.proportions.is_empty() {
        return Err(IoError::Usage("at least one masking proportion is required".into()));
    }
    let label = config
        .label
        .as_deref()
        .ok_or(IoError::Usage("benchmark needs a label column".into()))?;
    config.validate()?;
    let data = LoadedData::load(config)?;
    let raw = data.table.labels.as_ref().expect("label column was requested");
    let (labels, positive) = binarize_labels(raw, config.positive_label.as_deref())?;
    let report = run_benchmark_with_jobs(&data.dataset, &labels, &config.benchmark_config(), config.resolved_jobs())?;
    create_dir(&config.output)?;
    let csv_path = config.output.join("report.csv");
    std::fs::write(&csv_path, report.to_csv()).map_err(|e| IoError::file(&csv_path, e))?;
    let json_path = config.output.join("report.json");
    std::fs::write(&json_path, report.to_json()).map_err(|e| IoError::file(&json_path, e))?;

    let mut summary = format!("label `{label}`, positive class `{positive}`\n");
    for r in &report.rows {
        summary.push_str(&format!(
            "{:>4} {:<14} {:<8} {}\n",
            r.proportion,
            r.method,
            r.metric,
            match (r.mean, r.sd) {
                (Some(m), Some(s)) => format!("{m:.3} ± {s:.3}"),
                _ => "failed".into(),
            }
        ));
    }
    for e in &report.errors {
        summary.push_str(&format!("error: {} {} fold {}: {}\n", e.proportion, e.method, e.fold, e.message));
    }
    Ok(CommandOutcome {
        files: vec![csv_path, json_path],
        cell_errors: report.errors.len(),
        summary,
    })
}

/// Loss traces of fuzzy-coded and hard-binary-coded training, one pair of
/// files per masking proportion.
pub fn cmd_losses(config: &RunConfig) -> Result<CommandOutcome, IoError> {
    config.validate()?;
    let data = LoadedData::load(config)?;
    create_dir(&config.output)?;
    let seed = config.master_seed();
    let bench = config.benchmark_config();
    let proportions = if config.proportions.is_empty() { vec![0.0] } else { config.proportions.clone() };
    let mut files = Vec::new();
    let mut summary = String::new();
    for prop in proportions {
        let (masked, _) = mask_dataset(&data.dataset, &bench.masking_plan(prop));
        for coding in [Coding::Fuzzy, Coding::HardBinary] {
            let params = GainParams {
                coding,
                ..config.gain_params()
            };
            let init = seed.derive("losses-init", &[prop.to_bits()]);
            let mut model = GainModel::new(masked.schema().clone(), params, &mut init.stream("init"))?;
            let tc = config.train_config(seed.derive("losses-train", &[prop.to_bits()]));
            let (trace, diverged) = match train(&mut model, &masked, &tc) {
                Ok(t) => (t, false),
                Err(GainError::Divergence { trace, .. }) => (trace, true),
                Err(e) => return Err(e.into()),
            };
            let tag = match coding {
                Coding::Fuzzy => "fuzzy",
                Coding::HardBinary => "hard-binary",
            };
            let path = config.output.join(format!("losses_{prop}_{tag}.csv"));
            write_trace(create(&path)?, &trace, diverged)?;
            summary.push_str(&format!(
                "proportion {prop} {tag}: {} epochs{}\n",
                trace.len(),
                if diverged { " (diverged)" } else { "" }
            ));
            files.push(path);
        }
    }
    Ok(CommandOutcome {
        files,
        cell_errors: 0,
        summary,
    })
}

/// Describes the schema and, when a data file is given, its missingness.
pub fn cmd_inspect_schema(config: &RunConfig) -> Result<CommandOutcome, IoError> {
    let schema = read_schema(config.require_schema()?)?;
    let mut s = format!(
        "features p = {}, coded width Q = {}, hash {}\n",
        schema.len(),
        schema.width(),
        schema.hash_hex()
    );
    let missing = match &config.data {
        Some(path) => {
            let t = read_table_file(path, &schema, config.label.as_deref())?;
            s.push_str(&format!("{} records\n", t.records.len()));
            Some(
                (0..schema.len())
                    .map(|j| t.records.iter().filter(|r| r.cells[j].is_missing()).count())
                    .collect::<Vec<_>>(),
            )
        }
        None => None,
    };
    for (j, (spec, block)) in schema.blocks().enumerate() {
        s.push_str(&format!(
            "{:>3} {:<16} {:<10} q={:<3} cols {}..{}",
            j,
            spec.name,
            spec.kind.as_str(),
            spec.cardinality,
            block.start,
            block.end
        ));
        if let Some(m) = &missing {
            s.push_str(&format!("  missing {}", m[j]));
        }
        s.push('\n');
    }
    Ok(CommandOutcome {
        files: Vec::new(),
        cell_errors: 0,
        summary: s,
    })
}

/// Runs a command and, for commands that write files, records a manifest
/// next to its outputs.
pub fn run_command(command: Command, config: &RunConfig) -> Result<CommandOutcome, IoError> {
    let outcome = match command {
        Command::Impute => cmd_impute(config)?,
        Command::Benchmark => cmd_benchmark(config)?,
        Command::Losses => cmd_losses(config)?,
        Command::Train => cmd_train(config)?,
        Command::InspectSchema => return cmd_inspect_schema(config),
    };
    let hash = match config.schema.as_deref() {
        Some(p) => Some(read_schema(p)?.hash_hex()),
        None => None,
    };
    Manifest::new(command, config, hash, &outcome.files)?.write(&config.output)?;
    Ok(outcome)
}
