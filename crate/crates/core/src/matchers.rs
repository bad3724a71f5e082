//! Fine-tuning-free baseline matchers: TF-IDF cosine and token Jaccard,
//! each turned into a binary decision by a tuned score threshold.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pair_builder::{OfferPair, PairDataset};
use crate::scalar::Scalar;
use crate::textprep::{jaccard, normalize_title, tokenize, NormalizedTitle};

/// Smoothed TF-IDF weighting, `idf(t) = ln((1 + N) / (1 + df(t))) + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TfidfModel<F: Scalar> {
    /// Token to dense index, assigned in lexicographic token order.
    pub vocabulary: BTreeMap<String, usize>,
    pub idf: Vec<F>,
    pub doc_count: usize,
}

pub fn fit_tfidf<F: Scalar>(corpus: &[NormalizedTitle]) -> Result<TfidfModel<F>> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in corpus {
        let unique: BTreeSet<&str> = doc.words().collect();
        for token in unique {
            *df.entry(token).or_default() += 1;
        }
    }
    let n = F::from_count(corpus.len());
    let one = F::one();
    let mut vocabulary = BTreeMap::new();
    let mut idf = Vec::with_capacity(df.len());
    for (index, (token, count)) in df.into_iter().enumerate() {
        vocabulary.insert(token.to_string(), index);
        idf.push(((one + n) / (one + F::from_count(count))).ln() + one);
    }
    Ok(TfidfModel {
        vocabulary,
        idf,
        doc_count: corpus.len(),
    })
}

impl<F: Scalar> TfidfModel<F> {
    /// Sparse raw-count × idf vector; out-of-vocabulary tokens are skipped.
    pub fn weights(&self, title: &NormalizedTitle) -> BTreeMap<usize, F> {
        let mut v: BTreeMap<usize, F> = BTreeMap::new();
        for word in title.words() {
            if let Some(&i) = self.vocabulary.get(word) {
                let w = v.entry(i).or_insert(F::zero());
                *w = *w + self.idf[i];
            }
        }
        v
    }

    pub fn cosine(&self, a: &NormalizedTitle, b: &NormalizedTitle) -> F {
        if !a.is_empty() && a == b {
            return F::one();
        }
        let va = self.weights(a);
        let vb = self.weights(b);
        let norm = |v: &BTreeMap<usize, F>| v.values().fold(F::zero(), |s, &w| s + w * w).sqrt();
        let (na, nb) = (norm(&va), norm(&vb));
        if na == F::zero() || nb == F::zero() {
            return F::zero();
        }
        let dot = va
            .iter()
            .filter_map(|(i, &wa)| vb.get(i).map(|&wb| wa * wb))
            .fold(F::zero(), |s, x| s + x);
        (dot / (na * nb)).max(F::zero()).min(F::one())
    }
}

/// Normalized titles of every distinct offer in a dataset (both sides),
/// in first-appearance order.
pub fn training_corpus(dataset: &PairDataset) -> Vec<NormalizedTitle> {
    let mut seen = HashSet::new();
    let mut corpus = Vec::new();
    for p in &dataset.pairs {
        for (id, title) in [(&p.id_left, &p.title_left), (&p.id_right, &p.title_right)] {
            if seen.insert(id.as_str()) {
                corpus.push(normalize_title(title));
            }
        }
    }
    corpus
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scorer {
    #[serde(alias = "tfidf")]
    TfidfCosine,
    Jaccard,
}

impl std::str::FromStr for Scorer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tfidf" | "tfidf_cosine" => Ok(Scorer::TfidfCosine),
            "jaccard" => Ok(Scorer::Jaccard),
            other => Err(Error::Config(format!("unknown matcher `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct MatchPrediction<F: Scalar> {
    pub pair_id: String,
    pub score: F,
    #[serde(with = "crate::binary")]
    pub decision: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdMatcher<F: Scalar> {
    scorer: Scorer,
    threshold: F,
    model: Option<TfidfModel<F>>,
}

impl<F: Scalar> ThresholdMatcher<F> {
    pub fn new(scorer: Scorer, threshold: F, model: Option<TfidfModel<F>>) -> Result<Self> {
        if !(threshold >= F::zero() && threshold <= F::one()) {
            return Err(Error::InvalidThreshold(threshold.to_f64().unwrap_or(f64::NAN)));
        }
        if scorer == Scorer::TfidfCosine && model.is_none() {
            return Err(Error::MissingModel);
        }
        Ok(Self {
            scorer,
            threshold,
            model,
        })
    }

    pub fn scorer(&self) -> Scorer {
        self.scorer
    }

    pub fn threshold(&self) -> F {
        self.threshold
    }

    pub fn model(&self) -> Option<&TfidfModel<F>> {
        self.model.as_ref()
    }

    pub fn with_threshold(mut self, threshold: F) -> Result<Self> {
        self.threshold = threshold;
        Self::new(self.scorer, self.threshold, self.model)
    }

    /// Similarity of two raw titles in `[0, 1]`.
    pub fn score(&self, left: &str, right: &str) -> F {
        let (l, r) = (normalize_title(left), normalize_title(right));
        let s = match (self.scorer, &self.model) {
            (Scorer::TfidfCosine, Some(model)) => model.cosine(&l, &r),
            (Scorer::TfidfCosine, None) => unreachable!("checked in constructor"),
            (Scorer::Jaccard, _) => jaccard(&tokenize(&l), &tokenize(&r)),
        };
        s.max(F::zero()).min(F::one())
    }

    pub fn score_pair(&self, pair: &OfferPair) -> MatchPrediction<F> {
        let score = self.score(&pair.title_left, &pair.title_right);
        MatchPrediction {
            pair_id: pair.pair_id.clone(),
            score,
            decision: score >= self.threshold,
        }
    }

    pub fn predict(&self, dataset: &PairDataset) -> Vec<MatchPrediction<F>> {
        dataset.pairs.par_iter().map(|p| self.score_pair(p)).collect()
    }
}

/// `2tp / (2tp + fp + fn)` kept as an exact fraction.
#[derive(Debug, Clone, Copy)]
struct F1Fraction {
    num: u128,
    den: u128,
}

impl F1Fraction {
    fn new(tp: usize, fp: usize, fn_: usize) -> Self {
        let num = 2 * tp as u128;
        let den = num + fp as u128 + fn_ as u128;
        if den == 0 {
            Self { num: 0, den: 1 }
        } else {
            Self { num, den }
        }
    }

    fn beats(&self, other: &Self) -> bool {
        self.num * other.den > other.num * self.den
    }
}

/// Picks the threshold maximizing F1 over `{observed scores} ∪ {0}`, with
/// a pair predicted positive when `score >= threshold`. Ties go to the
/// larger threshold.
pub fn tune_threshold<F: Scalar>(scores: &[(F, bool)]) -> Result<F> {
    if scores.iter().any(|(s, _)| s.is_nan()) {
        return Err(Error::Domain("NaN score".into()));
    }
    let positives = scores.iter().filter(|(_, l)| *l).count();
    if positives == 0 || positives == scores.len() {
        return Err(Error::DegenerateLabels);
    }

    let mut sorted: Vec<(F, bool)> = scores.to_vec();
    sorted.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("no NaN"));
    let mut candidates: Vec<F> = sorted.iter().map(|&(s, _)| s).collect();
    candidates.push(F::zero());
    candidates.sort_by(|a, b| b.partial_cmp(a).expect("no NaN"));
    candidates.dedup();

    let (mut tp, mut fp) = (0usize, 0usize);
    let mut next = 0;
    let mut best: Option<(F1Fraction, F)> = None;
    for t in candidates {
        while next < sorted.len() && sorted[next].0 >= t {
            if sorted[next].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            next += 1;
        }
        let f1 = F1Fraction::new(tp, fp, positives - tp);
        if best.is_none_or(|(b, _)| f1.beats(&b)) {
            best = Some((f1, t));
        }
    }
    Ok(best.expect("at least one candidate").1)
}

/// Fits the scorer on a training split and tunes its threshold there.
pub fn fit_baseline<F: Scalar>(train: &PairDataset, scorer: Scorer) -> Result<ThresholdMatcher<F>> {
    let model = match scorer {
        Scorer::TfidfCosine => Some(fit_tfidf(&training_corpus(train))?),
        Scorer::Jaccard => None,
    };
    let untuned = ThresholdMatcher::new(scorer, F::zero(), model)?;
    let scored: Vec<(F, bool)> = train
        .pairs
        .par_iter()
        .map(|p| (untuned.score(&p.title_left, &p.title_right), p.label))
        .collect();
    let threshold = tune_threshold(&scored)?;
    untuned.with_threshold(threshold)
}

pub fn write_predictions<F: Scalar, W: Write>(predictions: &[MatchPrediction<F>], mut out: W) -> Result<()> {
    for p in predictions {
        serde_json::to_writer(&mut out, p).map_err(|e| Error::Stream(e.into()))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads `{pair_id, score, decision}` lines; errors carry 1-based line numbers.
pub fn read_predictions<F: Scalar, R: BufRead>(input: R) -> Result<Vec<MatchPrediction<F>>> {
    let mut out = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let p = serde_json::from_str(&line).map_err(|e| Error::MalformedRow {
            row: idx + 1,
            message: e.to_string(),
        })?;
        out.push(p);
    }
    Ok(out)
}
