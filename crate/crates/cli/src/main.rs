use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pmatch::config::{Overrides, PipelineConfig};
use pmatch::stage::{Stage, StageContext, StageError};
use pmatch::{cmd_baseline, cmd_build, cmd_evaluate, cmd_export, BaselineArgs, EvaluateArgs, ExportArgs};
use pmatch_core::matchers::Scorer;
use pmatch_core::pair_export::DEFAULT_SEED;

/// Build product-matching pair datasets and evaluate baselines.
///
/// Exit codes: 0 success, 2 config or usage, 3 ingest, 4 pairing, 5 split,
/// 6 file output, 7 matcher, 8 evaluation, 9 export.
#[derive(Parser)]
#[command(name = "pmatch", version)]
struct Cli {
    /// Pipeline config (JSON). Flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Machine-readable report destination.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatcherArg {
    Tfidf,
    Jaccard,
}

impl From<MatcherArg> for Scorer {
    fn from(m: MatcherArg) -> Self {
        match m {
            MatcherArg::Tfidf => Scorer::TfidfCosine,
            MatcherArg::Jaccard => Scorer::Jaccard,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Clean offer dumps and emit WDC-format test and train splits.
    Build {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        k_negatives: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a similarity baseline on train files and score a test file.
    Baseline {
        #[arg(long, required = true, num_args = 1..)]
        train: Vec<PathBuf>,
        #[arg(long)]
        test: PathBuf,
        #[arg(long, value_enum)]
        matcher: Option<MatcherArg>,
        /// Fixed threshold; tuned on each train file when omitted.
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregate several prediction runs against gold labels.
    Evaluate {
        #[arg(long, required = true, num_args = 1..)]
        predictions: Vec<PathBuf>,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        conf: Option<f64>,
    },
    /// Write train/val JSON lines for transformer fine-tuning.
    Export {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_config(path: Option<&PathBuf>, overrides: &Overrides) -> Result<PipelineConfig, StageError> {
    let mut cfg = match path {
        Some(p) => PipelineConfig::load(p).stage(Stage::Config)?,
        None => PipelineConfig::default(),
    };
    cfg.apply(overrides);
    cfg.validate().stage(Stage::Config)?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), StageError> {
    let mut overrides = Overrides {
        report: cli.report.clone(),
        ..Default::default()
    };
    match cli.command {
        Command::Build { seed, k_negatives, out } => {
            overrides.seed = seed;
            overrides.k_negatives = k_negatives;
            overrides.out = out;
            let Some(path) = cli.config.as_ref() else {
                return Err(anyhow::anyhow!("build needs --config")).stage(Stage::Config);
            };
            let cfg = load_config(Some(path), &overrides)?;
            let report = cmd_build(&cfg)?;
            print!("{}", report.size_table());
        }
        Command::Baseline {
            train,
            test,
            matcher,
            threshold,
            out,
        } => {
            overrides.matcher = matcher.map(Into::into);
            overrides.threshold = threshold;
            overrides.out = out;
            let cfg = load_config(cli.config.as_ref(), &overrides)?;
            let report = cmd_baseline(&BaselineArgs {
                train,
                test,
                scorer: cfg.matcher.scorer,
                threshold: cfg.matcher.threshold,
                out_dir: cfg.out_dir,
                report: cfg.report,
            })?;
            print!("{}", report.table());
        }
        Command::Evaluate {
            predictions,
            labels,
            conf,
        } => {
            overrides.conf = conf;
            let cfg = load_config(cli.config.as_ref(), &overrides)?;
            let report = cmd_evaluate(&EvaluateArgs {
                predictions,
                labels,
                conf: cfg.conf,
                report: cfg.report,
            })?;
            print!("{}", report.table());
        }
        Command::Export { dataset, seed, out } => {
            let cfg = load_config(cli.config.as_ref(), &overrides)?;
            // the split plan seed doubles as the export seed when a config is given
            let seed = seed.unwrap_or(if cli.config.is_some() { cfg.split_plan.seed } else { DEFAULT_SEED });
            let manifest = cmd_export(&ExportArgs {
                dataset,
                seed,
                out_dir: out,
            })?;
            println!(
                "{}: {} train, {} val (seed {})",
                manifest.dataset, manifest.train_count, manifest.val_count, manifest.seed
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_env("PMATCH_LOG")
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
        )
        .with_writer(std::io::stderr)
        .with_target(false)
        .with_ansi(std::io::IsTerminal::is_terminal(&std::io::stderr()))
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.stage.exit_code())
        }
    }
}
