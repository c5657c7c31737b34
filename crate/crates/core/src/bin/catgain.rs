use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use catgain::codec::Coding;
use catgain::eval::{Aggregation, Method};
use catgain::io::{replay, run_command, Command, IoError, RunConfig};

#[derive(Parser)]
#[command(name = "catgain", version, about = "Adversarial imputation of missing categorical data")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write k multiply-imputed completions and per-cell agreement.
    Impute(Opts),
    /// Cross-validated downstream benchmark of imputers.
    Benchmark(Opts),
    /// Loss traces under fuzzy and hard-binary coding.
    Losses(Opts),
    /// Train a model and save it with its loss trace.
    Train(Opts),
    /// Print the coded layout of a schema.
    InspectSchema(Opts),
    /// Re-run a recorded manifest and compare output digests.
    Replay {
        manifest: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct Opts {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    schema: Option<PathBuf>,
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    label: Option<String>,
    #[arg(long)]
    positive_label: Option<String>,
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Comma-separated methods, e.g. `gain,svd,average`.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    methods: Option<Vec<Method>>,
    #[arg(long, value_delimiter = ',')]
    proportions: Option<Vec<f64>>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    hint_rate: Option<f64>,
    #[arg(long)]
    lambda_sim: Option<f64>,
    #[arg(long, value_parser = parse_coding)]
    coding: Option<Coding>,
    #[arg(long, value_delimiter = ',')]
    ranks: Option<Vec<usize>>,
    #[arg(long)]
    ridge_lambda: Option<f64>,
    #[arg(short, long)]
    k: Option<usize>,
    #[arg(long, value_parser = parse_aggregation)]
    aggregation: Option<Aggregation>,
    #[arg(long)]
    ae_epochs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
}

fn parse_coding(s: &str) -> Result<Coding, String> {
    match s {
        "fuzzy" => Ok(Coding::Fuzzy),
        "hard-binary" => Ok(Coding::HardBinary),
        _ => Err(format!("unknown coding `{s}` (fuzzy, hard-binary)")),
    }
}

fn parse_aggregation(s: &str) -> Result<Aggregation, String> {
    match s {
        "per-draw" => Ok(Aggregation::PerDraw),
        "modal" => Ok(Aggregation::Modal),
        _ => Err(format!("unknown aggregation `{s}` (per-draw, modal)")),
    }
}

impl Opts {
    fn resolve(self) -> Result<RunConfig, IoError> {
        let mut c = match &self.config {
            Some(p) => RunConfig::read(p)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => { $( if let Some(v) = self.$field { c.$field = v; } )* };
        }
        macro_rules! set_opt {
            ($($field:ident),*) => { $( if self.$field.is_some() { c.$field = self.$field; } )* };
        }
        set_opt!(schema, data, label, positive_label, model);
        set!(output, methods, proportions, folds, epochs, batch_size, learning_rate, hint_rate, lambda_sim);
        set!(coding, ranks, ridge_lambda, k, aggregation, ae_epochs, seed, jobs);
        Ok(c)
    }
}

fn run(cli: Cli) -> Result<u8, IoError> {
    let (command, opts) = match cli.command {
        Cmd::Impute(o) => (Command::Impute, o),
        Cmd::Benchmark(o) => (Command::Benchmark, o),
        Cmd::Losses(o) => (Command::Losses, o),
        Cmd::Train(o) => (Command::Train, o),
        Cmd::InspectSchema(o) => (Command::InspectSchema, o),
        Cmd::Replay { manifest, output } => {
            let r = replay(&manifest, &output)?;
            if r.identical() {
                println!("replay identical: {}", output.display());
                return Ok(0);
            }
            eprintln!("replay differs in: {}", r.mismatches.join(", "));
            return Ok(1);
        }
    };
    let outcome = run_command(command, &opts.resolve()?)?;
    print!("{}", outcome.summary);
    if !outcome.summary.ends_with('\n') {
        println!();
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(u8::from(outcome.cell_errors > 0))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e @ IoError::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
