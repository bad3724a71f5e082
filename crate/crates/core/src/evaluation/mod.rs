//! Metrics, Student-t quantiles and multi-run aggregation.

mod metrics;
mod student_t;

pub use metrics::{compute_metrics, confusion, gold_labels, ConfusionCounts, GoldLabel, Metrics};
pub use student_t::{ln_gamma, regularized_incomplete_beta, t_cdf, t_ppf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// Error bar `t_ppf((1 + conf) / 2, n - 1) × sigma`.
///
/// Note there is no `1/√n` factor: this is the t-scaled spread of the runs,
/// not the standard error of their mean.
pub fn standard_error<F: Scalar>(sigma: F, n: usize, conf: F) -> Result<F> {
    if n < 2 {
        return Err(Error::TooFewRuns(n));
    }
    if !(conf > F::zero() && conf < F::one()) {
        return Err(Error::Domain(format!("confidence {conf} outside (0, 1)")));
    }
    if sigma < F::zero() || !sigma.is_finite() {
        return Err(Error::Domain(format!("sigma {sigma} must be finite and >= 0")));
    }
    let p = (F::one() + conf) / F::lit(2.0);
    Ok(t_ppf(p, n - 1)? * sigma)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EvalAggregate<F: Scalar> {
    pub runs: Vec<Metrics<F>>,
    pub n: usize,
    pub conf: F,
    pub mean_f1: F,
    pub mean_precision: F,
    pub mean_recall: F,
    pub mean_accuracy: F,
    /// Sample (n - 1) standard deviation of F1.
    pub sigma: F,
    pub std_err_f1: F,
}

fn mean<F: Scalar>(values: impl Iterator<Item = F>, n: usize) -> F {
    values.fold(F::zero(), |acc, v| acc + v) / F::from_count(n)
}

pub fn aggregate_runs<F: Scalar>(runs: &[Metrics<F>], conf: F) -> Result<EvalAggregate<F>> {
    let n = runs.len();
    if n < 2 {
        return Err(Error::TooFewRuns(n));
    }
    // Deviations are taken around the first run so identical runs give an
    // exact zero spread instead of summation round-off.
    let pivot = runs[0].f1;
    let shift = mean(runs.iter().map(|m| m.f1 - pivot), n);
    let mean_f1 = pivot + shift;
    let ss = runs
        .iter()
        .map(|m| (m.f1 - pivot - shift) * (m.f1 - pivot - shift))
        .fold(F::zero(), |acc, v| acc + v);
    let sigma = (ss / F::from_count(n - 1)).sqrt();
    Ok(EvalAggregate {
        runs: runs.to_vec(),
        n,
        conf,
        mean_f1,
        mean_precision: mean(runs.iter().map(|m| m.precision), n),
        mean_recall: mean(runs.iter().map(|m| m.recall), n),
        mean_accuracy: mean(runs.iter().map(|m| m.accuracy), n),
        sigma,
        std_err_f1: standard_error(sigma, n, conf)?,
    })
}

/// Formats a fraction and its error bar in percentage points, e.g. `85.73(± 1.89)`.
pub fn format_percent_with_error<F: Scalar>(value: F, err: F) -> String {
    let pct = |v: F| v.to_f64().unwrap_or(f64::NAN) * 100.0;
    format!("{:.2}(± {:.2})", pct(value), pct(err))
}
