//! Product-matching dataset construction and evaluation.
//!
//! The pipeline turns raw multi-store offer dumps into WDC-compatible pair
//! files ([`ingest`] → [`pair_builder`]), scores pairs with classical
//! baselines ([`matchers`]), evaluates and aggregates runs
//! ([`evaluation`]) and exports transformer-ready text ([`pair_export`]).
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the command-line tool uses.

pub(crate) mod binary;
pub mod error;
pub mod evaluation;
pub mod ingest;
pub mod matchers;
pub mod pair_builder;
pub mod pair_export;
pub mod scalar;
pub mod synth;
pub mod textprep;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Real = f64;
pub type Metrics = evaluation::Metrics<Real>;
pub type EvalAggregate = evaluation::EvalAggregate<Real>;
pub type TfidfModel = matchers::TfidfModel<Real>;
pub type ThresholdMatcher = matchers::ThresholdMatcher<Real>;
pub type MatchPrediction = matchers::MatchPrediction<Real>;

pub type Metrics32 = evaluation::Metrics<f32>;
pub type EvalAggregate32 = evaluation::EvalAggregate<f32>;
pub type TfidfModel32 = matchers::TfidfModel<f32>;
pub type ThresholdMatcher32 = matchers::ThresholdMatcher<f32>;
pub type MatchPrediction32 = matchers::MatchPrediction<f32>;
