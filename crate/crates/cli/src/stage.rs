use std::fmt;
use std::time::Instant;

/// Pipeline stage, used to pick the process exit code on failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Ingest,
    Pairing,
    Split,
    Emit,
    Matcher,
    Evaluation,
    Export,
}

impl Stage {
    pub const ALL: [Stage; 8] = [
        Stage::Config,
        Stage::Ingest,
        Stage::Pairing,
        Stage::Split,
        Stage::Emit,
        Stage::Matcher,
        Stage::Evaluation,
        Stage::Export,
    ];

    /// 0 is success; 1 is left to the runtime (panics); 2 matches clap's
    /// usage errors so bad flags and bad config files look the same.
    pub fn exit_code(self) -> u8 {
        match self {
            Stage::Config => 2,
            Stage::Ingest => 3,
            Stage::Pairing => 4,
            Stage::Split => 5,
            Stage::Emit => 6,
            Stage::Matcher => 7,
            Stage::Evaluation => 8,
            Stage::Export => 9,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stage::Config => "config",
            Stage::Ingest => "ingest",
            Stage::Pairing => "pairing",
            Stage::Split => "split",
            Stage::Emit => "emit",
            Stage::Matcher => "matcher",
            Stage::Evaluation => "evaluation",
            Stage::Export => "export",
        }
    }
}

#[derive(Debug)]
pub struct StageError {
    pub stage: Stage,
    pub source: anyhow::Error,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} stage failed: {:#}", self.stage.name(), self.source)
    }
}

impl std::error::Error for StageError {}

pub trait StageContext<T> {
    fn stage(self, stage: Stage) -> Result<T, StageError>;
}

impl<T, E: Into<anyhow::Error>> StageContext<T> for Result<T, E> {
    fn stage(self, stage: Stage) -> Result<T, StageError> {
        self.map_err(|e| StageError {
            stage,
            source: e.into(),
        })
    }
}

/// Runs `f` and logs how long it took under the stage's name.
pub(crate) fn timed<T, E: Into<anyhow::Error>>(
    stage: Stage,
    what: &str,
    f: impl FnOnce() -> Result<T, E>,
) -> Result<T, StageError> {
    let start = Instant::now();
    let out = f().stage(stage);
    tracing::info!(
        stage = stage.name(),
        what,
        elapsed_ms = start.elapsed().as_secs_f64() * 1e3,
        ok = out.is_ok(),
        "stage finished"
    );
    out
}
