//! Positive pairing by EAN, Jaccard hard-negative mining, split assembly and
//! WDC-format emission.
//!
//! Split sampling uses `ChaCha8Rng::seed_from_u64(seed)` and the Fisher-Yates
//! shuffle from `rand` 0.8. Both are value-stable across platforms, so a
//! given seed always yields the same splits.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use flate2::write::GzEncoder;
use flate2::{Compression, GzBuilder};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::ingest::{is_known_wdc_field, Offer, OfferTable};
use crate::textprep::{normalize_title, tokenize};

/// Negatives drawn per positive in every training split.
pub const NEGATIVES_PER_POSITIVE: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfferPair {
    pub pair_id: String,
    pub id_left: String,
    pub id_right: String,
    pub title_left: String,
    pub title_right: String,
    pub ean_left: Option<String>,
    pub ean_right: Option<String>,
    pub category_left: String,
    pub category_right: String,
    pub label: bool,
    /// Fields of a loaded pair file that have no dedicated slot.
    #[serde(default)]
    pub attributes: Map<String, Value>,
}

impl OfferPair {
    /// Builds the canonical pair (`id_left < id_right`) for two offers; the
    /// label is EAN equality.
    pub fn from_offers(a: &Offer, b: &Offer) -> Self {
        debug_assert_ne!(a.id, b.id);
        let (l, r) = if a.id <= b.id { (a, b) } else { (b, a) };
        OfferPair {
            pair_id: format!("{}#{}", l.id, r.id),
            id_left: l.id.clone(),
            id_right: r.id.clone(),
            title_left: l.title.clone(),
            title_right: r.title.clone(),
            ean_left: Some(l.ean.clone()),
            ean_right: Some(r.ean.clone()),
            category_left: l.category.clone(),
            category_right: r.category.clone(),
            label: l.ean == r.ean,
            attributes: Map::new(),
        }
    }

    pub fn canonical_key(&self) -> (&str, &str) {
        if self.id_left <= self.id_right {
            (&self.id_left, &self.id_right)
        } else {
            (&self.id_right, &self.id_left)
        }
    }

    pub fn to_wdc_object(&self) -> Map<String, Value> {
        let mut obj = Map::new();
        obj.insert("pair_id".into(), self.pair_id.clone().into());
        obj.insert("label".into(), u8::from(self.label).into());
        obj.insert("id_left".into(), self.id_left.clone().into());
        obj.insert("title_left".into(), self.title_left.clone().into());
        obj.insert("category_left".into(), self.category_left.clone().into());
        if let Some(ean) = &self.ean_left {
            obj.insert("ean_left".into(), ean.clone().into());
        }
        obj.insert("id_right".into(), self.id_right.clone().into());
        obj.insert("title_right".into(), self.title_right.clone().into());
        obj.insert("category_right".into(), self.category_right.clone().into());
        if let Some(ean) = &self.ean_right {
            obj.insert("ean_right".into(), ean.clone().into());
        }
        for (k, v) in &self.attributes {
            if !is_known_wdc_field(k) {
                obj.insert(k.clone(), v.clone());
            }
        }
        obj
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitKind {
    Test,
    TrainSmall,
    TrainMedium,
    TrainLarge,
    Unsplit,
}

impl SplitKind {
    pub const TRAIN: [SplitKind; 3] = [Self::TrainSmall, Self::TrainMedium, Self::TrainLarge];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Test => "test",
            Self::TrainSmall => "train_small",
            Self::TrainMedium => "train_medium",
            Self::TrainLarge => "train_large",
            Self::Unsplit => "unsplit",
        }
    }

    /// Guesses the split from a file name such as `cameras_train_small` or
    /// `computers_gs`.
    pub fn infer_from_name(name: &str) -> Self {
        let lower = name.to_lowercase();
        if lower.contains("xlarge") {
            Self::Unsplit
        } else if lower.contains("small") {
            Self::TrainSmall
        } else if lower.contains("medium") {
            Self::TrainMedium
        } else if lower.contains("large") {
            Self::TrainLarge
        } else if lower.contains("test") || lower.ends_with("_gs") || lower.contains("gold") {
            Self::Test
        } else {
            Self::Unsplit
        }
    }
}

impl std::fmt::Display for SplitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairDataset {
    pub name: String,
    pub split: SplitKind,
    pub pairs: Vec<OfferPair>,
}

impl PairDataset {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.pairs.iter().filter(|p| p.label).count()
    }

    pub fn negatives(&self) -> usize {
        self.len() - self.positives()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeRatios {
    pub small: usize,
    pub medium: usize,
    pub large: usize,
}

impl Default for SizeRatios {
    fn default() -> Self {
        Self {
            small: 1,
            medium: 3,
            large: 7,
        }
    }
}

impl SizeRatios {
    pub fn of(&self, split: SplitKind) -> Option<usize> {
        match split {
            SplitKind::TrainSmall => Some(self.small),
            SplitKind::TrainMedium => Some(self.medium),
            SplitKind::TrainLarge => Some(self.large),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitPlan {
    pub seed: u64,
    pub k_negatives: usize,
    pub size_ratios: SizeRatios,
    pub test_pos: usize,
    pub test_neg: usize,
    /// Positives in the small split. `None` takes the largest count the
    /// pools allow after the test split is removed.
    pub small_positives: Option<usize>,
}

impl Default for SplitPlan {
    fn default() -> Self {
        Self {
            seed: 42,
            k_negatives: 20,
            size_ratios: SizeRatios::default(),
            test_pos: 300,
            test_neg: 800,
            small_positives: None,
        }
    }
}

impl SplitPlan {
    pub fn validate(&self) -> Result<()> {
        let r = self.size_ratios;
        if r.small == 0 || r.medium == 0 || r.large == 0 {
            return Err(Error::InvalidPlan("size ratios must be positive".into()));
        }
        if !(r.small <= r.medium && r.medium <= r.large) {
            return Err(Error::InvalidPlan(
                "size ratios must satisfy small <= medium <= large".into(),
            ));
        }
        if self.k_negatives == 0 {
            return Err(Error::InvalidPlan("k_negatives must be at least 1".into()));
        }
        if self.small_positives == Some(0) {
            return Err(Error::InvalidPlan("small_positives must be positive".into()));
        }
        Ok(())
    }
}

/// All same-EAN pairs, sorted by `(ean, id_left, id_right)`.
pub fn build_positive_pairs(table: &OfferTable) -> Vec<OfferPair> {
    let mut groups: BTreeMap<&str, Vec<&Offer>> = BTreeMap::new();
    for offer in &table.offers {
        groups.entry(offer.ean.as_str()).or_default().push(offer);
    }
    let mut out = Vec::new();
    for (_, mut group) in groups {
        group.sort_by(|a, b| a.id.cmp(&b.id));
        for (i, a) in group.iter().enumerate() {
            for b in &group[i + 1..] {
                out.push(OfferPair::from_offers(a, b));
            }
        }
    }
    out
}

/// Jaccard score kept as an exact fraction so ranking is free of rounding.
#[derive(Debug, Clone, Copy)]
struct Overlap {
    shared: u32,
    union: u32,
}

impl Overlap {
    fn between(a: &[u32], b: &[u32]) -> Self {
        let (mut i, mut j, mut shared) = (0, 0, 0u32);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    shared += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        let union = (a.len() + b.len()) as u32 - shared;
        if union == 0 {
            Overlap { shared: 0, union: 1 }
        } else {
            Overlap { shared, union }
        }
    }

    fn cmp_score(&self, other: &Self) -> std::cmp::Ordering {
        (u64::from(self.shared) * u64::from(other.union))
            .cmp(&(u64::from(other.shared) * u64::from(self.union)))
    }
}

/// For every offer, keeps its `k` most title-similar partners within the
/// same category that carry a different EAN (ties by ascending partner id),
/// and returns the union of those pairs, canonical and sorted by
/// `(id_left, id_right)`.
pub fn mine_negative_pairs(table: &OfferTable, k: usize) -> Vec<OfferPair> {
    let mut by_category: BTreeMap<&str, Vec<&Offer>> = BTreeMap::new();
    for offer in &table.offers {
        by_category.entry(offer.category.as_str()).or_default().push(offer);
    }

    let mut out: Vec<OfferPair> = by_category
        .into_values()
        .flat_map(|offers| mine_category(&offers, k))
        .collect();
    out.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
    out
}

fn mine_category(offers: &[&Offer], k: usize) -> Vec<OfferPair> {
    if k == 0 || offers.len() < 2 {
        return Vec::new();
    }
    // Index offers by ascending id so index order is the tie-break order.
    let mut offers = offers.to_vec();
    offers.sort_by(|a, b| a.id.cmp(&b.id));

    let mut vocab: HashMap<String, u32> = HashMap::new();
    let token_ids: Vec<Vec<u32>> = offers
        .iter()
        .map(|o| {
            let tokens = tokenize(&normalize_title(&o.title));
            let mut ids: Vec<u32> = tokens
                .iter()
                .map(|t| {
                    let next = vocab.len() as u32;
                    *vocab.entry(t.to_string()).or_insert(next)
                })
                .collect();
            ids.sort_unstable();
            ids
        })
        .collect();

    let selected: BTreeSet<(usize, usize)> = (0..offers.len())
        .into_par_iter()
        .map(|i| {
            let mut cands: Vec<(Overlap, usize)> = (0..offers.len())
                .filter(|&j| j != i && offers[j].ean != offers[i].ean)
                .map(|j| (Overlap::between(&token_ids[i], &token_ids[j]), j))
                .collect();
            let rank = |a: &(Overlap, usize), b: &(Overlap, usize)| {
                b.0.cmp_score(&a.0).then(a.1.cmp(&b.1))
            };
            if cands.len() > k {
                cands.select_nth_unstable_by(k - 1, rank);
                cands.truncate(k);
            }
            cands
                .into_iter()
                .map(|(_, j)| (i.min(j), i.max(j)))
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect::<Vec<_>>()
        .into_iter()
        .collect();

    selected
        .into_iter()
        .map(|(a, b)| OfferPair::from_offers(offers[a], offers[b]))
        .collect()
}

fn dedupe_sorted(pairs: &[OfferPair]) -> Vec<OfferPair> {
    let mut map: BTreeMap<(String, String), &OfferPair> = BTreeMap::new();
    for p in pairs {
        let (l, r) = p.canonical_key();
        map.entry((l.to_string(), r.to_string())).or_insert(p);
    }
    map.into_values().cloned().collect()
}

fn sorted(mut pairs: Vec<OfferPair>) -> Vec<OfferPair> {
    pairs.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
    pairs
}

/// Draws the test split, then nested training splits, from the pair pools.
///
/// Both pools are deduplicated and sorted canonically, then shuffled
/// (positives first, then negatives) with one generator seeded from
/// `plan.seed`. The test split takes the head of each shuffled pool; the
/// training splits are nested prefixes of the remainder, so
/// `small ⊂ medium ⊂ large` and none of them meets the test split.
/// Pairs within each output are sorted by `(id_left, id_right)`.
pub fn build_splits(
    positives: &[OfferPair],
    negatives: &[OfferPair],
    plan: &SplitPlan,
    base_name: &str,
) -> Result<BTreeMap<SplitKind, PairDataset>> {
    plan.validate()?;
    if positives.iter().any(|p| !p.label) || negatives.iter().any(|p| p.label) {
        return Err(Error::Domain(
            "pair pools must contain only pairs of their own label".into(),
        ));
    }

    let mut pos = dedupe_sorted(positives);
    let mut neg = dedupe_sorted(negatives);
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);

    let large = plan.size_ratios.large;
    let per_pos = NEGATIVES_PER_POSITIVE;
    let small_pos = match plan.small_positives {
        Some(p) => p,
        None => {
            let avail_pos = pos.len().saturating_sub(plan.test_pos);
            let avail_neg = neg.len().saturating_sub(plan.test_neg);
            (avail_pos / large).min(avail_neg / (per_pos * large)).max(1)
        }
    };

    let need_pos = plan.test_pos + large * small_pos;
    if pos.len() < need_pos {
        return Err(Error::InsufficientPool {
            class: "positive",
            required: need_pos,
            available: pos.len(),
        });
    }
    let need_neg = plan.test_neg + per_pos * large * small_pos;
    if neg.len() < need_neg {
        return Err(Error::InsufficientPool {
            class: "negative",
            required: need_neg,
            available: neg.len(),
        });
    }

    let name = |split: SplitKind| {
        if base_name.is_empty() {
            split.as_str().to_string()
        } else {
            format!("{base_name}_{split}")
        }
    };

    let mut out = BTreeMap::new();
    let test: Vec<OfferPair> = pos[..plan.test_pos]
        .iter()
        .chain(&neg[..plan.test_neg])
        .cloned()
        .collect();
    out.insert(
        SplitKind::Test,
        PairDataset {
            name: name(SplitKind::Test),
            split: SplitKind::Test,
            pairs: sorted(test),
        },
    );

    let pos_pool = &pos[plan.test_pos..];
    let neg_pool = &neg[plan.test_neg..];
    for split in SplitKind::TRAIN {
        let ratio = plan.size_ratios.of(split).expect("training split");
        let n_pos = ratio * small_pos;
        let pairs: Vec<OfferPair> = pos_pool[..n_pos]
            .iter()
            .chain(&neg_pool[..per_pos * n_pos])
            .cloned()
            .collect();
        out.insert(
            split,
            PairDataset {
                name: name(split),
                split,
                pairs: sorted(pairs),
            },
        );
    }
    Ok(out)
}

/// Writes the dataset as uncompressed JSON lines.
pub fn write_wdc<W: Write>(dataset: &PairDataset, mut out: W) -> Result<()> {
    for pair in &dataset.pairs {
        serde_json::to_writer(&mut out, &pair.to_wdc_object())
            .map_err(|e| Error::Stream(e.into()))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Writes the dataset as gzip-compressed JSON lines.
///
/// The gzip header carries no timestamp or file name, so identical datasets
/// produce identical bytes.
pub fn emit_wdc(dataset: &PairDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let encoder: GzEncoder<BufWriter<File>> =
        GzBuilder::new().mtime(0).write(BufWriter::new(file), Compression::default());
    let wrap = |e: Error| match e {
        Error::Stream(io) => Error::io(path, io),
        other => other,
    };
    let mut encoder = encoder;
    write_wdc(dataset, &mut encoder).map_err(wrap)?;
    let mut inner = encoder.finish().map_err(|e| Error::io(path, e))?;
    inner.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
