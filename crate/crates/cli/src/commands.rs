use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use pmatch_core::evaluation::{
    aggregate_runs, compute_metrics, format_percent_with_error, gold_labels,
};
use pmatch_core::ingest::{clean_offers, load_wdc_file, parse_offers, CleaningReport, RawOfferRecord};
use pmatch_core::matchers::{
    fit_baseline, fit_tfidf, read_predictions, training_corpus, write_predictions, Scorer,
};
use pmatch_core::pair_builder::{
    build_positive_pairs, build_splits, emit_wdc, mine_negative_pairs, PairDataset, SplitKind,
};
use pmatch_core::pair_export::{export_for_training, make_train_val_split, ExportManifest};
use pmatch_core::{EvalAggregate, Metrics, ThresholdMatcher};
use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::stage::{timed, Stage, StageContext, StageError};
use crate::targets::target_for;

type StageResult<T> = Result<T, StageError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSize {
    pub dataset: String,
    pub split: SplitKind,
    pub file: String,
    pub positives: usize,
    pub negatives: usize,
    pub target_positives: Option<usize>,
    pub target_negatives: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolSize {
    pub positives: usize,
    pub negatives: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    pub seed: u64,
    pub k_negatives: usize,
    pub cleaning: BTreeMap<String, CleaningReport>,
    pub pools: BTreeMap<String, PoolSize>,
    pub splits: Vec<SplitSize>,
}

impl BuildReport {
    pub fn size_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<10} {:<13} {:>8} {:>8} {:>13} {:>13}",
            "dataset", "split", "pos", "neg", "published_pos", "published_neg"
        );
        let opt = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
        for row in &self.splits {
            let _ = writeln!(
                s,
                "{:<10} {:<13} {:>8} {:>8} {:>13} {:>13}",
                row.dataset,
                row.split.as_str(),
                row.positives,
                row.negatives,
                opt(row.target_positives),
                opt(row.target_negatives)
            );
        }
        s
    }
}

fn read_records(cfg: &PipelineConfig) -> anyhow::Result<Vec<RawOfferRecord>> {
    let mut all = Vec::new();
    for path in &cfg.inputs {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        let offset = all.len();
        let records = parse_offers(file, &cfg.schema).with_context(|| format!("parsing {}", path.display()))?;
        // keep row-derived ids unique across several input files
        all.extend(records.into_iter().map(|mut r| {
            r.source_row += offset;
            r
        }));
    }
    Ok(all)
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut out = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Writes `report` to the configured path, or to stderr when none is set.
fn emit_report<T: Serialize>(report: &T, path: Option<&Path>) -> StageResult<()> {
    match path {
        Some(p) => write_json(report, p).stage(Stage::Emit),
        None => {
            let text = serde_json::to_string_pretty(report).stage(Stage::Emit)?;
            eprintln!("{text}");
            Ok(())
        }
    }
}

/// ingest → clean → positives → negatives → splits → emit.
///
/// Split files are named `{dataset}_{split}.json.gz` inside `out_dir`.
pub fn cmd_build(cfg: &PipelineConfig) -> StageResult<BuildReport> {
    cfg.validate_for_build().stage(Stage::Config)?;
    let category_map = cfg.load_category_map().stage(Stage::Config)?;
    let records = timed(Stage::Ingest, "parse", || read_records(cfg))?;
    tracing::info!(records = records.len(), "parsed offers");

    let datasets: Vec<(String, Option<&str>)> = if cfg.categories.is_empty() {
        vec![(cfg.name.clone(), None)]
    } else {
        cfg.categories.iter().map(|c| (c.clone(), Some(c.as_str()))).collect()
    };

    let mut report = BuildReport {
        seed: cfg.split_plan.seed,
        k_negatives: cfg.split_plan.k_negatives,
        cleaning: BTreeMap::new(),
        pools: BTreeMap::new(),
        splits: Vec::new(),
    };
    let mut emitted: Vec<PairDataset> = Vec::new();
    for (name, filter) in datasets {
        let outcome = timed(Stage::Ingest, "clean", || {
            Ok::<_, anyhow::Error>(clean_offers(&records, &category_map, filter))
        })?;
        tracing::info!(dataset = %name, offers = outcome.table.len(), "cleaned");
        report.cleaning.insert(name.clone(), outcome.report);

        let positives = timed(Stage::Pairing, "positives", || {
            Ok::<_, anyhow::Error>(build_positive_pairs(&outcome.table))
        })?;
        let negatives = timed(Stage::Pairing, "negatives", || {
            Ok::<_, anyhow::Error>(mine_negative_pairs(&outcome.table, cfg.split_plan.k_negatives))
        })?;
        report.pools.insert(
            name.clone(),
            PoolSize {
                positives: positives.len(),
                negatives: negatives.len(),
            },
        );
        let splits = timed(Stage::Split, "splits", || {
            build_splits(&positives, &negatives, &cfg.split_plan, &name)
        })
        .map_err(|e| StageError {
            source: e.source.context(format!("dataset `{name}`")),
            ..e
        })?;
        emitted.extend(splits.into_values());
    }

    if cfg.combine_all {
        for split in SplitKind::TRAIN {
            let mut pairs: Vec<_> = emitted
                .iter()
                .filter(|d| d.split == split)
                .flat_map(|d| d.pairs.iter().cloned())
                .collect();
            pairs.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
            emitted.push(PairDataset {
                name: format!("all_{split}"),
                split,
                pairs,
            });
        }
    }

    std::fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("creating {}", cfg.out_dir.display()))
        .stage(Stage::Emit)?;
    for ds in &emitted {
        let file = format!("{}.json.gz", ds.name);
        let path = cfg.out_dir.join(&file);
        timed(Stage::Emit, "emit", || emit_wdc(ds, &path))?;
        let dataset = ds
            .name
            .strip_suffix(&format!("_{}", ds.split))
            .unwrap_or(&ds.name)
            .to_string();
        let target = target_for(&dataset, ds.split);
        report.splits.push(SplitSize {
            dataset,
            split: ds.split,
            file,
            positives: ds.positives(),
            negatives: ds.negatives(),
            target_positives: target.map(|t| t.positives),
            target_negatives: target.map(|t| t.negatives),
        });
    }
    emit_report(&report, cfg.report.as_deref())?;
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct BaselineArgs {
    pub train: Vec<PathBuf>,
    pub test: PathBuf,
    pub scorer: Scorer,
    pub threshold: Option<f64>,
    pub out_dir: PathBuf,
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineRun {
    pub train: String,
    pub test: String,
    pub scorer: Scorer,
    pub threshold: f64,
    pub tuned: bool,
    pub metrics: Metrics,
    pub predictions: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub runs: Vec<BaselineRun>,
}

impl BaselineReport {
    pub fn table(&self) -> String {
        let w = self.runs.iter().map(|r| r.train.len()).max().unwrap_or(0).max(5);
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<w$} {:<9} {:>9} {:>9} {:>9} {:>9} {:>9}",
            "train", "matcher", "threshold", "precision", "recall", "f1", "accuracy"
        );
        for r in &self.runs {
            let m = &r.metrics;
            let _ = writeln!(
                s,
                "{:<w$} {:<9} {:>9.4} {:>9.2} {:>9.2} {:>9.2} {:>9.2}",
                r.train,
                scorer_name(r.scorer),
                r.threshold,
                100.0 * m.precision,
                100.0 * m.recall,
                100.0 * m.f1,
                100.0 * m.accuracy
            );
        }
        s
    }
}

fn scorer_name(s: Scorer) -> &'static str {
    match s {
        Scorer::TfidfCosine => "tfidf",
        Scorer::Jaccard => "jaccard",
    }
}

fn load_pairs(path: &Path, stage: Stage) -> StageResult<PairDataset> {
    timed(stage, "load", || load_wdc_file(path))
}

fn matcher_for(train: &PairDataset, scorer: Scorer, threshold: Option<f64>) -> anyhow::Result<ThresholdMatcher> {
    match threshold {
        None => Ok(fit_baseline(train, scorer)?),
        Some(t) => {
            let model = match scorer {
                Scorer::TfidfCosine => Some(fit_tfidf(&training_corpus(train))?),
                Scorer::Jaccard => None,
            };
            Ok(ThresholdMatcher::new(scorer, t, model)?)
        }
    }
}

/// Fits one matcher per training file and scores the test file with each.
///
/// Predictions go to `{out}/{test}__{train}.{matcher}.predictions.jsonl`.
pub fn cmd_baseline(args: &BaselineArgs) -> StageResult<BaselineReport> {
    if args.train.is_empty() {
        return Err(anyhow::anyhow!("at least one --train file is required")).stage(Stage::Config);
    }
    let test = load_pairs(&args.test, Stage::Ingest)?;
    let labels = gold_labels(&test);
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))
        .stage(Stage::Emit)?;

    let mut runs = Vec::new();
    for train_path in &args.train {
        let train = load_pairs(train_path, Stage::Ingest)?;
        let matcher = timed(Stage::Matcher, "fit", || matcher_for(&train, args.scorer, args.threshold))
            .map_err(|e| StageError {
                source: e.source.context(format!("training on {}", train_path.display())),
                ..e
            })?;
        let predictions = timed(Stage::Matcher, "predict", || {
            Ok::<_, anyhow::Error>(matcher.predict(&test))
        })?;
        let metrics = timed(Stage::Evaluation, "metrics", || compute_metrics(&predictions, &labels))?;
        let file = format!("{}__{}.{}.predictions.jsonl", test.name, train.name, scorer_name(args.scorer));
        let path = args.out_dir.join(&file);
        timed(Stage::Emit, "predictions", || -> anyhow::Result<()> {
            let mut out = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
            write_predictions(&predictions, &mut out)?;
            out.flush()?;
            Ok(())
        })?;
        runs.push(BaselineRun {
            train: train.name.clone(),
            test: test.name.clone(),
            scorer: args.scorer,
            threshold: matcher.threshold(),
            tuned: args.threshold.is_none(),
            metrics,
            predictions: file,
        });
    }
    let report = BaselineReport { runs };
    let path = args
        .report
        .clone()
        .unwrap_or_else(|| args.out_dir.join(format!("{}.baseline.json", test.name)));
    write_json(&report, &path).stage(Stage::Emit)?;
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct EvaluateArgs {
    pub predictions: Vec<PathBuf>,
    pub labels: PathBuf,
    pub conf: f64,
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluateReport {
    pub files: Vec<String>,
    pub aggregate: EvalAggregate,
}

impl EvaluateReport {
    /// Metrics in percentage points, the aggregate F1 with its error bar.
    pub fn table(&self) -> String {
        let a = &self.aggregate;
        let w = self.files.iter().map(String::len).max().unwrap_or(0).max(4);
        let mut s = String::new();
        let _ = writeln!(s, "{:<w$} {:>9} {:>9} {:>9} {:>9}", "run", "precision", "recall", "f1", "accuracy");
        for (file, m) in self.files.iter().zip(&a.runs) {
            let _ = writeln!(
                s,
                "{:<w$} {:>9.2} {:>9.2} {:>9.2} {:>9.2}",
                file,
                100.0 * m.precision,
                100.0 * m.recall,
                100.0 * m.f1,
                100.0 * m.accuracy
            );
        }
        let _ = writeln!(
            s,
            "{:<w$} {:>9.2} {:>9.2} {:>9.2} {:>9.2}",
            "mean",
            100.0 * a.mean_precision,
            100.0 * a.mean_recall,
            100.0 * a.mean_f1,
            100.0 * a.mean_accuracy
        );
        let _ = writeln!(
            s,
            "F1 over {} runs at {:.0}% confidence: {}",
            a.n,
            100.0 * a.conf,
            format_percent_with_error(a.mean_f1, a.std_err_f1)
        );
        s
    }
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> StageResult<EvaluateReport> {
    if !(args.conf > 0.0 && args.conf < 1.0) {
        return Err(anyhow::anyhow!("conf must lie in (0, 1), got {}", args.conf)).stage(Stage::Config);
    }
    if args.predictions.len() < 2 {
        return Err(anyhow::anyhow!(
            "need at least two prediction files, got {}",
            args.predictions.len()
        ))
        .stage(Stage::Evaluation);
    }
    let labels = gold_labels(&load_pairs(&args.labels, Stage::Ingest)?);
    let mut runs = Vec::new();
    let mut files = Vec::new();
    for path in &args.predictions {
        let preds = timed(Stage::Ingest, "predictions", || -> anyhow::Result<_> {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            Ok(read_predictions(BufReader::new(file))?)
        })?;
        let metrics = compute_metrics(&preds, &labels)
            .with_context(|| format!("scoring {}", path.display()))
            .stage(Stage::Evaluation)?;
        runs.push(metrics);
        files.push(
            path.file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default(),
        );
    }
    let aggregate = timed(Stage::Evaluation, "aggregate", || aggregate_runs(&runs, args.conf))?;
    let report = EvaluateReport { files, aggregate };
    if let Some(p) = &args.report {
        write_json(&report, p).stage(Stage::Emit)?;
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct ExportArgs {
    pub dataset: PathBuf,
    pub seed: u64,
    pub out_dir: PathBuf,
}

pub fn cmd_export(args: &ExportArgs) -> StageResult<ExportManifest> {
    let dataset = load_pairs(&args.dataset, Stage::Ingest)?;
    let split = timed(Stage::Export, "split", || make_train_val_split(&dataset, args.seed))?;
    timed(Stage::Export, "write", || export_for_training(&dataset, &split, &args.out_dir))
}
