use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::env::NetworkConfig;
use crate::receivers::Combiner;
use crate::rl::Hyperparams;
use crate::trainers::{Method, TrainingConfig};

/// When set, relative output paths are resolved against this directory.
pub const OUTPUT_ROOT_VAR: &str = "CFXL_OUTPUT_ROOT";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FuzzySection {
    /// Number of fuzzy agents.
    pub m: usize,
}

impl Default for FuzzySection {
    fn default() -> Self {
        Self { m: 2 }
    }
}

/// Frozen-policy evaluation after training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluationConfig {
    pub layouts: usize,
    pub n_mc: usize,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        Self { layouts: 200, n_mc: 200 }
    }
}

/// One experiment. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub network: NetworkConfig,
    #[serde(default)]
    pub fuzzy: FuzzySection,
    #[serde(default)]
    pub hyper: Hyperparams,
    #[serde(default)]
    pub training: TrainingConfig,
    #[serde(default)]
    pub evaluation: EvaluationConfig,
    pub method: Method,
    pub combiner: Combiner,
    pub episodes: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
}

fn invalid(field: &str, reason: impl std::fmt::Display) -> HarnessError {
    HarnessError::Config(format!("`{field}`: {reason}"))
}

impl ExperimentConfig {
    /// A config with default sections.
    pub fn new(network: NetworkConfig, method: Method, combiner: Combiner, episodes: usize, seed: u64) -> Self {
        Self {
            network,
            fuzzy: FuzzySection::default(),
            hyper: Hyperparams::default(),
            training: TrainingConfig::default(),
            evaluation: EvaluationConfig::default(),
            method,
            combiner,
            episodes,
            seed,
            output_dir: PathBuf::from("out"),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let config: Self = serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(super::io_err(path))?;
        Self::from_json(&text).map_err(|e| match e {
            HarnessError::Config(msg) => HarnessError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.network.validate().map_err(|e| HarnessError::Config(format!("network: {e}")))?;
        self.hyper.validate().map_err(|e| HarnessError::Config(format!("hyper: {e}")))?;
        if self.method.is_fuzzy() && !(1..=self.network.num_ue).contains(&self.fuzzy.m) {
            return Err(invalid("fuzzy.m", format!("must lie in 1..={} (num_ue)", self.network.num_ue)));
        }
        if self.training.steps_per_episode == 0 {
            return Err(invalid("training.steps_per_episode", "must be at least 1"));
        }
        if self.training.n_mc == 0 {
            return Err(invalid("training.n_mc", "must be at least 1"));
        }
        if self.evaluation.layouts > 0 && self.evaluation.n_mc == 0 {
            return Err(invalid("evaluation.n_mc", "must be at least 1"));
        }
        Ok(())
    }

    /// Output directory after applying [`OUTPUT_ROOT_VAR`].
    pub fn resolved_output_dir(&self) -> PathBuf {
        resolve_output(&self.output_dir)
    }
}

/// Joins relative paths onto `$CFXL_OUTPUT_ROOT` when it is set.
pub fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_ROOT_VAR) {
        Some(root) if path.is_relative() && !root.is_empty() => PathBuf::from(root).join(path),
        _ => path.to_path_buf(),
    }
}
