//! Pipeline configuration file.
//!
//! JSON, every key optional except `inputs` for `build`:
//!
//! ```json
//! {
//!   "inputs": ["offers.csv.gz"],
//!   "schema": {"format": "csv", "delimiter": ",",
//!              "columns": {"ean": "ean", "seller": "seller", "title": "title",
//!                          "category": "category", "id": "offer_id"}},
//!   "category_map": "categories.json",
//!   "categories": ["chemia", "napoje"],
//!   "combine_all": true,
//!   "split_plan": {"seed": 42, "k_negatives": 20,
//!                  "size_ratios": {"small": 1, "medium": 3, "large": 7},
//!                  "test_pos": 300, "test_neg": 800, "small_positives": null},
//!   "matcher": {"scorer": "tfidf", "threshold": null},
//!   "out_dir": "out",
//!   "conf": 0.95,
//!   "report": null
//! }
//! ```
//!
//! Relative paths are resolved against the directory holding the config
//! file. Command-line flags override the matching keys.

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context};
use pmatch_core::evaluation::DEFAULT_CONFIDENCE;
use pmatch_core::ingest::{CategoryMap, SchemaConfig};
use pmatch_core::matchers::Scorer;
use pmatch_core::pair_builder::SplitPlan;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatcherConfig {
    pub scorer: Scorer,
    /// Fixed decision threshold. `None` tunes it on the training split.
    pub threshold: Option<f64>,
}

impl Default for MatcherConfig {
    fn default() -> Self {
        Self {
            scorer: Scorer::TfidfCosine,
            threshold: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub inputs: Vec<PathBuf>,
    pub schema: SchemaConfig,
    pub category_map: Option<PathBuf>,
    /// One dataset is built per listed category. Empty builds a single
    /// dataset over every offer, named after `name`.
    pub categories: Vec<String>,
    /// Also emit `all_*` train splits as the union of the per-category ones.
    pub combine_all: bool,
    pub name: String,
    pub split_plan: SplitPlan,
    pub matcher: MatcherConfig,
    pub out_dir: PathBuf,
    pub conf: f64,
    pub report: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            inputs: Vec::new(),
            schema: SchemaConfig::default(),
            category_map: None,
            categories: Vec::new(),
            combine_all: false,
            name: "offers".into(),
            split_plan: SplitPlan::default(),
            matcher: MatcherConfig::default(),
            out_dir: PathBuf::from("out"),
            conf: DEFAULT_CONFIDENCE,
            report: None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub k_negatives: Option<usize>,
    pub matcher: Option<Scorer>,
    pub threshold: Option<f64>,
    pub conf: Option<f64>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: PipelineConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        self.inputs.iter_mut().for_each(fix);
        self.category_map.iter_mut().for_each(fix);
        fix(&mut self.out_dir);
        self.report.iter_mut().for_each(fix);
    }

    /// Flags are taken relative to the working directory, as usual.
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.split_plan.seed = seed;
        }
        if let Some(k) = o.k_negatives {
            self.split_plan.k_negatives = k;
        }
        if let Some(m) = o.matcher {
            self.matcher.scorer = m;
        }
        if o.threshold.is_some() {
            self.matcher.threshold = o.threshold;
        }
        if let Some(c) = o.conf {
            self.conf = c;
        }
        if let Some(out) = &o.out {
            self.out_dir = out.clone();
        }
        if let Some(r) = &o.report {
            self.report = Some(r.clone());
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        ensure!(
            self.conf > 0.0 && self.conf < 1.0,
            "conf must lie in (0, 1), got {}",
            self.conf
        );
        if let Some(t) = self.matcher.threshold {
            ensure!((0.0..=1.0).contains(&t), "threshold must lie in [0, 1], got {t}");
        }
        self.split_plan.validate()?;
        for p in self.inputs.iter().chain(&self.category_map) {
            ensure!(p.exists(), "referenced path does not exist: {}", p.display());
        }
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.categories {
            ensure!(!c.trim().is_empty(), "empty category name");
            ensure!(seen.insert(c.as_str()), "category `{c}` listed twice");
            ensure!(
                !(self.combine_all && c == "all"),
                "category `all` clashes with combine_all output"
            );
        }
        ensure!(!self.name.trim().is_empty(), "name must not be empty");
        Ok(())
    }

    pub fn validate_for_build(&self) -> anyhow::Result<()> {
        self.validate()?;
        if self.inputs.is_empty() {
            bail!("config lists no input files");
        }
        if self.combine_all && self.categories.len() < 2 {
            bail!("combine_all needs at least two categories");
        }
        Ok(())
    }

    pub fn load_category_map(&self) -> anyhow::Result<CategoryMap> {
        match &self.category_map {
            None => Ok(CategoryMap::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading category map {}", p.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing category map {}", p.display()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let cfg: PipelineConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(cfg, PipelineConfig::default());
        assert_eq!(cfg.split_plan.seed, 42);
        assert_eq!(cfg.conf, 0.95);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<PipelineConfig>(r#"{"seeed": 1}"#).is_err());
    }

    #[test]
    fn relative_paths_follow_config_dir() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("a.csv"), "").unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"inputs": ["a.csv"], "out_dir": "o", "report": "/abs/r.json"}"#).unwrap();
        let cfg = PipelineConfig::load(&path).unwrap();
        assert_eq!(cfg.inputs, vec![dir.path().join("a.csv")]);
        assert_eq!(cfg.out_dir, dir.path().join("o"));
        assert_eq!(cfg.report, Some(PathBuf::from("/abs/r.json")));
        cfg.validate_for_build().unwrap();
    }

    #[test]
    fn validation_failures() {
        let mut cfg = PipelineConfig {
            conf: 1.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        cfg.conf = 0.9;
        cfg.inputs.push("/definitely/missing.csv".into());
        assert!(cfg.validate().unwrap_err().to_string().contains("missing.csv"));
        cfg.inputs.clear();
        assert!(cfg.validate_for_build().is_err());
        cfg.matcher.threshold = Some(1.5);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn overrides_win() {
        let mut cfg = PipelineConfig::default();
        cfg.apply(&Overrides {
            seed: Some(7),
            k_negatives: Some(5),
            matcher: Some(Scorer::Jaccard),
            conf: Some(0.9),
            ..Default::default()
        });
        assert_eq!(cfg.split_plan.seed, 7);
        assert_eq!(cfg.split_plan.k_negatives, 5);
        assert_eq!(cfg.matcher.scorer, Scorer::Jaccard);
        assert_eq!(cfg.conf, 0.9);
    }
}
