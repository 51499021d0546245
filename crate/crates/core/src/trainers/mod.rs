//! Training loops for the fuzzy and plain multi-agent power controllers.
//!
//! Every controller implements [`Policy`]; [`train`] drives it through
//! episodes of the [`Environment`] and [`evaluate`] runs a frozen policy on
//! fresh layouts.

mod baselines;
mod env;
mod fl_ctce;
mod fl_ctde;
mod log;
mod maddpg;
mod nets;
mod run;

pub use baselines::{FullPower, RandomPower};
pub use env::{
    action_to_power, build_observations, env_step, Environment, RewardKind, StepOutcome, FUZZY_ACTION_FLOOR,
};
pub use fl_ctce::FlCtce;
pub use fl_ctde::FlCtde;
pub use log::{EpisodeRecord, EvalLog, EvalRecord, TrainingLog};
pub use maddpg::Maddpg;
pub use run::{
    build_policy, evaluate, evaluation_channel_seed, evaluation_environment, train, train_episode, Policy,
    TrainingConfig,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::EnvError;
use crate::fuzzy::FuzzyError;
use crate::receivers::ReceiverError;
use crate::rl::RlError;

#[derive(Debug, Error, PartialEq)]
pub enum TrainError {
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Receiver(#[from] ReceiverError),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Rl(#[from] RlError),
    #[error("invalid action {value} for agent {agent}")]
    InvalidAction { agent: usize, value: f64 },
    #[error("non-finite value: {0}")]
    NonFinite(String),
}

/// Power-control method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    FlCtce,
    FlCtde,
    Maddpg,
    FullPower,
    RandomPower,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::FlCtce, Method::FlCtde, Method::Maddpg, Method::FullPower, Method::RandomPower];
    pub const LEARNED: [Method; 3] = [Method::FlCtce, Method::FlCtde, Method::Maddpg];

    pub fn name(self) -> &'static str {
        match self {
            Method::FlCtce => "fl_ctce",
            Method::FlCtde => "fl_ctde",
            Method::Maddpg => "maddpg",
            Method::FullPower => "full_power",
            Method::RandomPower => "random_power",
        }
    }

    pub fn is_fuzzy(self) -> bool {
        matches!(self, Method::FlCtce | Method::FlCtde)
    }

    pub fn is_learned(self) -> bool {
        Self::LEARNED.contains(&self)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests;
