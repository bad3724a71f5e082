//! Serializes pairs into `[CLS] left [SEP] right [SEP]` text and writes the
//! train/validation files consumed by the fine-tuning harness.
//!
//! Output directory layout:
//!
//! * `train.jsonl`, `val.jsonl`: one `{"pair_id", "text", "label"}` object
//!   per line, label as `0`/`1`.
//! * `manifest.json`: seed, validation fraction and line counts.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pair_builder::{OfferPair, PairDataset};

pub const CLS: &str = "[CLS]";
pub const SEP: &str = "[SEP]";
pub const VAL_FRACTION: f64 = 0.20;
pub const DEFAULT_SEED: u64 = 42;
pub const MIN_PAIRS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedPair {
    pub pair_id: String,
    pub text: String,
    #[serde(with = "crate::binary")]
    pub label: bool,
}

fn check_title(pair: &OfferPair, side: &'static str, title: &str) -> Result<()> {
    let reason = if title.trim().is_empty() {
        Some("is empty")
    } else if title.contains(SEP) || title.contains(CLS) {
        Some("contains a reserved marker")
    } else {
        None
    };
    match reason {
        Some(reason) => Err(Error::InvalidTitle {
            pair_id: pair.pair_id.clone(),
            side,
            reason,
        }),
        None => Ok(()),
    }
}

pub fn serialize_pair(pair: &OfferPair) -> Result<SerializedPair> {
    check_title(pair, "left", &pair.title_left)?;
    check_title(pair, "right", &pair.title_right)?;
    Ok(SerializedPair {
        pair_id: pair.pair_id.clone(),
        text: format!("{CLS} {} {SEP} {} {SEP}", pair.title_left, pair.title_right),
        label: pair.label,
    })
}

/// Splits serialized text back into its left and right titles.
pub fn split_serialized(text: &str) -> Option<(&str, &str)> {
    let body = text.strip_prefix(CLS)?.strip_prefix(' ')?;
    let body = body.strip_suffix(SEP)?.strip_suffix(' ')?;
    let (left, right) = body.split_once(&format!(" {SEP} "))?;
    if right.contains(SEP) {
        return None;
    }
    Some((left, right))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub train_ids: Vec<String>,
    pub val_ids: Vec<String>,
    pub val_fraction: f64,
    pub seed: u64,
}

/// `round(0.2 × n)` in integer arithmetic; `0.2n` is never exactly `k + 0.5`.
fn validation_size(n: usize) -> usize {
    (2 * n + 5) / 10
}

/// Seeded shuffle (ChaCha8 + Fisher-Yates); the first 80% train, the rest
/// validate.
pub fn make_train_val_split(dataset: &PairDataset, seed: u64) -> Result<SplitManifest> {
    let n = dataset.len();
    if n < MIN_PAIRS {
        return Err(Error::DatasetTooSmall { len: n, min: MIN_PAIRS });
    }
    let mut seen = HashSet::with_capacity(n);
    for p in &dataset.pairs {
        if !seen.insert(p.pair_id.as_str()) {
            return Err(Error::DuplicatePairId(p.pair_id.clone()));
        }
    }
    let mut ids: Vec<String> = dataset.pairs.iter().map(|p| p.pair_id.clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);
    let val_ids = ids.split_off(n - validation_size(n));
    Ok(SplitManifest {
        train_ids: ids,
        val_ids,
        val_fraction: VAL_FRACTION,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportManifest {
    pub dataset: String,
    pub seed: u64,
    pub val_fraction: f64,
    pub train_count: usize,
    pub val_count: usize,
}

fn write_lines(path: &Path, lines: &[SerializedPair]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for line in lines {
        serde_json::to_writer(&mut out, line).map_err(|e| Error::io(path, e.into()))?;
        out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn export_for_training(
    dataset: &PairDataset,
    manifest: &SplitManifest,
    out_dir: impl AsRef<Path>,
) -> Result<ExportManifest> {
    let out_dir = out_dir.as_ref();
    let by_id: std::collections::HashMap<&str, &OfferPair> =
        dataset.pairs.iter().map(|p| (p.pair_id.as_str(), p)).collect();
    if manifest.train_ids.len() + manifest.val_ids.len() != dataset.len() || by_id.len() != dataset.len() {
        return Err(Error::ManifestMismatch(format!(
            "{} + {} ids for {} pairs",
            manifest.train_ids.len(),
            manifest.val_ids.len(),
            dataset.len()
        )));
    }
    if manifest.val_ids.is_empty() {
        return Err(Error::ManifestMismatch("empty validation split".into()));
    }
    let mut used: HashSet<String> = HashSet::new();
    let mut collect = |ids: &[String]| -> Result<Vec<SerializedPair>> {
        ids.iter()
            .map(|id| {
                let pair = by_id
                    .get(id.as_str())
                    .ok_or_else(|| Error::ManifestMismatch(format!("unknown pair_id `{id}`")))?;
                if !used.insert(id.clone()) {
                    return Err(Error::ManifestMismatch(format!("pair_id `{id}` listed twice")));
                }
                serialize_pair(pair)
            })
            .collect()
    };
    let train = collect(&manifest.train_ids)?;
    let val = collect(&manifest.val_ids)?;

    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    write_lines(&out_dir.join("train.jsonl"), &train)?;
    write_lines(&out_dir.join("val.jsonl"), &val)?;

    let summary = ExportManifest {
        dataset: dataset.name.clone(),
        seed: manifest.seed,
        val_fraction: manifest.val_fraction,
        train_count: train.len(),
        val_count: val.len(),
    };
    let path = out_dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&summary).map_err(|e| Error::io(&path, e.into()))?;
    fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair_builder::SplitKind;
    use serde_json::Map;

    fn pair(id: usize, left: &str, right: &str, label: bool) -> OfferPair {
        OfferPair {
            pair_id: format!("p{id}"),
            id_left: format!("l{id}"),
            id_right: format!("r{id}"),
            title_left: left.into(),
            title_right: right.into(),
            ean_left: None,
            ean_right: None,
            category_left: String::new(),
            category_right: String::new(),
            label,
            attributes: Map::new(),
        }
    }

    fn dataset(n: usize) -> PairDataset {
        PairDataset {
            name: "toy".into(),
            split: SplitKind::TrainSmall,
            pairs: (0..n).map(|i| pair(i, "a", "b", i % 4 == 0)).collect(),
        }
    }

    #[test]
    fn serialization_order() {
        let s = serialize_pair(&pair(0, "nikon d750 body", "nikon d850 body", false)).unwrap();
        assert_eq!(s.text, "[CLS] nikon d750 body [SEP] nikon d850 body [SEP]");
        let same = serialize_pair(&pair(1, "t", "t", true)).unwrap();
        assert_eq!(same.text, "[CLS] t [SEP] t [SEP]");
        assert!(same.label);
        assert_eq!(split_serialized(&s.text), Some(("nikon d750 body", "nikon d850 body")));
    }

    #[test]
    fn bad_titles_rejected() {
        assert!(matches!(
            serialize_pair(&pair(0, "", "x", true)),
            Err(Error::InvalidTitle { side: "left", .. })
        ));
        assert!(matches!(
            serialize_pair(&pair(0, "x", "a [SEP] b", true)),
            Err(Error::InvalidTitle { side: "right", .. })
        ));
    }

    #[test]
    fn split_sizes() {
        let m = make_train_val_split(&dataset(100), 42).unwrap();
        assert_eq!((m.train_ids.len(), m.val_ids.len()), (80, 20));
        assert_eq!(m, make_train_val_split(&dataset(100), 42).unwrap());
        let m = make_train_val_split(&dataset(10), 42).unwrap();
        assert_eq!((m.train_ids.len(), m.val_ids.len()), (8, 2));
        assert_eq!(make_train_val_split(&dataset(13), 1).unwrap().val_ids.len(), 3);
        assert_eq!(make_train_val_split(&dataset(12), 1).unwrap().val_ids.len(), 2);
    }

    #[test]
    fn tiny_dataset_rejected() {
        assert!(matches!(
            make_train_val_split(&dataset(4), 42),
            Err(Error::DatasetTooSmall { len: 4, min: 5 })
        ));
    }

    #[test]
    fn manifest_must_match() {
        let ds = dataset(10);
        let mut m = make_train_val_split(&ds, 42).unwrap();
        m.val_ids[0] = "nope".into();
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            export_for_training(&ds, &m, dir.path()),
            Err(Error::ManifestMismatch(_))
        ));
    }
}
