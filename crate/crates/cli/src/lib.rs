//! Library side of the `pmatch` executable, split out so the pipeline can be
//! driven from tests without spawning a process.

pub mod commands;
pub mod config;
pub mod stage;
pub mod targets;

pub use commands::{
    cmd_baseline, cmd_build, cmd_evaluate, cmd_export, BaselineArgs, BaselineReport, BuildReport,
    EvaluateArgs, ExportArgs,
};
pub use config::{MatcherConfig, Overrides, PipelineConfig};
pub use stage::{Stage, StageError};
