//! Experiment configs, artifact writing, CDF tables and runtime benchmarks.

mod bench;
mod cdf;
mod config;
mod experiment;
mod reproduce;

pub use bench::{bench_runtime, runtime_csv, RuntimeRow};
pub use cdf::{cdf_csv, emit_cdf, empirical_cdf, read_sum_se};
pub use config::{resolve_output, EvaluationConfig, ExperimentConfig, FuzzySection, OUTPUT_ROOT_VAR};
pub use experiment::{run_config, run_experiment, RunOutcome, Summary};
pub use reproduce::{reproduce, ReproduceOptions, Scale};

use thiserror::Error;

use crate::trainers::TrainError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {reason}")]
    Log { path: String, reason: String },
    #[error("run failed after {completed} episodes: {source}")]
    Train { completed: usize, source: TrainError },
}

impl HarnessError {
    /// Process exit status: 2 for unusable input, 1 for failures during a run.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Log { .. } => 2,
            HarnessError::Io { .. } | HarnessError::Train { .. } => 1,
        }
    }
}

pub(crate) fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io { path: path.display().to_string(), source }
}

pub(crate) fn write_file(path: &std::path::Path, contents: &str) -> Result<(), HarnessError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    std::fs::write(path, contents).map_err(io_err(path))
}
