use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matchers::MatchPrediction;
use crate::pair_builder::PairDataset;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn record(&mut self, predicted: bool, actual: bool) {
        match (predicted, actual) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, false) => self.tn += 1,
            (false, true) => self.fn_ += 1,
        }
    }
}

/// Classification metrics as fractions in `[0, 1]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Metrics<F: Scalar> {
    pub accuracy: F,
    pub precision: F,
    pub recall: F,
    pub f1: F,
}

fn ratio<F: Scalar>(num: usize, den: usize) -> F {
    if den == 0 {
        F::zero()
    } else {
        F::from_count(num) / F::from_count(den)
    }
}

impl<F: Scalar> Metrics<F> {
    /// Any 0/0 ratio is reported as 0.
    pub fn from_counts(c: &ConfusionCounts) -> Self {
        let precision = ratio::<F>(c.tp, c.tp + c.fp);
        let recall = ratio::<F>(c.tp, c.tp + c.fn_);
        let f1 = if precision + recall > F::zero() {
            F::lit(2.0) * precision * recall / (precision + recall)
        } else {
            F::zero()
        };
        Self {
            accuracy: ratio(c.tp + c.tn, c.total()),
            precision,
            recall,
            f1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldLabel {
    pub pair_id: String,
    pub label: bool,
}

pub fn gold_labels(dataset: &PairDataset) -> Vec<GoldLabel> {
    dataset
        .pairs
        .iter()
        .map(|p| GoldLabel {
            pair_id: p.pair_id.clone(),
            label: p.label,
        })
        .collect()
}

/// Matches predictions to gold labels by `pair_id`.
pub fn confusion<F: Scalar>(
    predictions: &[MatchPrediction<F>],
    labels: &[GoldLabel],
) -> Result<ConfusionCounts> {
    if predictions.len() != labels.len() {
        return Err(Error::LengthMismatch {
            predictions: predictions.len(),
            labels: labels.len(),
        });
    }
    let mut gold = HashMap::with_capacity(labels.len());
    for l in labels {
        if gold.insert(l.pair_id.as_str(), l.label).is_some() {
            return Err(Error::DuplicatePairId(l.pair_id.clone()));
        }
    }
    let mut seen = HashSet::with_capacity(predictions.len());
    let mut counts = ConfusionCounts::default();
    for p in predictions {
        let &actual = gold
            .get(p.pair_id.as_str())
            .ok_or_else(|| Error::UnmatchedPairId(p.pair_id.clone()))?;
        if !seen.insert(p.pair_id.as_str()) {
            return Err(Error::DuplicatePairId(p.pair_id.clone()));
        }
        counts.record(p.decision, actual);
    }
    Ok(counts)
}

pub fn compute_metrics<F: Scalar>(
    predictions: &[MatchPrediction<F>],
    labels: &[GoldLabel],
) -> Result<Metrics<F>> {
    confusion(predictions, labels).map(|c| Metrics::from_counts(&c))
}
