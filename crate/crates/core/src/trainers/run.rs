use std::time::Instant;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{
    action_to_power, EpisodeRecord, EvalLog, EvalRecord, FlCtce, FlCtde, FullPower, Maddpg, Method, RandomPower,
    RewardKind, TrainError, TrainingLog, Environment,
};
use crate::env::NetworkConfig;
use crate::fuzzy::FuzzyConfig;
use crate::receivers::Combiner;
use crate::rl::{Checkpoint, Hyperparams};
use crate::seed::{self, SeedSet};

/// A power controller driven by [`train`] and [`evaluate`].
pub trait Policy {
    fn method(&self) -> Method;

    /// Smallest action mapped to power.
    fn action_floor(&self) -> f64;

    /// Called with the first observations of every episode (and of every
    /// evaluation layout).
    fn begin_episode(&mut self, observations: &DMatrix<f64>) -> Result<(), TrainError>;

    /// Per-user actions in `[0, 1]` for `observations` (`K x d_s`), with
    /// exploration noise of scale `noise`.
    fn act(&mut self, observations: &DMatrix<f64>, noise: f64) -> Result<Vec<f64>, TrainError>;

    /// Stores the transition ending in `next_observations` and performs at
    /// most one learning update. Returns the critic loss when one ran.
    fn observe(&mut self, rewards: &[f64], next_observations: &DMatrix<f64>) -> Result<Option<f64>, TrainError>;

    fn checkpoint(&self) -> Checkpoint;
}

/// Episode structure and training-time SE estimation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainingConfig {
    pub steps_per_episode: usize,
    /// Channel realizations per SE estimate during training.
    pub n_mc: usize,
    pub reward: RewardKind,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self { steps_per_episode: 10, n_mc: 20, reward: RewardKind::SumSe }
    }
}

/// Builds the controller for `method` with its networks initialized from
/// `seeds.init`. `fuzzy_agents` is ignored by the non-fuzzy methods.
pub fn build_policy(
    method: Method,
    network: &NetworkConfig,
    fuzzy_agents: usize,
    hyper: &Hyperparams,
    seeds: &SeedSet,
) -> Result<Box<dyn Policy>, TrainError> {
    hyper.validate()?;
    let (k, m) = (network.num_ue, network.num_bs);
    let fuzzy = FuzzyConfig { m: fuzzy_agents, d_s: m, d_a: 1 };
    Ok(match method {
        Method::FlCtce => Box::new(FlCtce::new(k, fuzzy, hyper, seeds)?),
        Method::FlCtde => Box::new(FlCtde::new(k, fuzzy, hyper, seeds)?),
        Method::Maddpg => Box::new(Maddpg::new(k, m, hyper, seeds)),
        Method::FullPower => Box::new(FullPower::new(k)),
        Method::RandomPower => Box::new(RandomPower::new(k, seeds.exploration)),
    })
}

/// Runs `episodes` training episodes, appending one record per episode to
/// `log`. On error the records of completed episodes stay in `log`.
pub fn train(
    policy: &mut dyn Policy,
    env: &mut Environment,
    combiner: Combiner,
    training: &TrainingConfig,
    hyper: &Hyperparams,
    episodes: usize,
    log: &mut TrainingLog,
) -> Result<(), TrainError> {
    for episode in 0..episodes {
        let record = train_episode(policy, env, combiner, training, hyper.noise_scale(episode, episodes), episode)?;
        log.records.push(record);
    }
    Ok(())
}

/// One training episode with exploration scale `noise`. The wall time
/// covers this call only.
pub fn train_episode(
    policy: &mut dyn Policy,
    env: &mut Environment,
    combiner: Combiner,
    training: &TrainingConfig,
    noise: f64,
    episode: usize,
) -> Result<EpisodeRecord, TrainError> {
    let start = Instant::now();
    let config = env.config().clone();
    let ns = config.ue_antennas();
    let steps = training.steps_per_episode.max(1);
    let mut obs = env.observations();
    policy.begin_episode(&obs)?;
    let mut ue_se = vec![0.0; config.num_ue];
    let mut power = 0.0;
    let mut max_user_power: f64 = 0.0;
    let mut losses = Vec::new();
    for _ in 0..steps {
        let actions = policy.act(&obs, noise)?;
        let powers = action_to_power(&actions, &config, policy.action_floor())?;
        let out = env.step(&powers, combiner, training.n_mc, training.reward)?;
        if let Some(loss) = policy.observe(&out.rewards, &out.next_observations)? {
            losses.push(loss);
        }
        for (acc, se) in ue_se.iter_mut().zip(&out.stats.se) {
            *acc += se;
        }
        power += powers.total(ns);
        max_user_power = powers.user_totals(ns).into_iter().fold(max_user_power, f64::max);
        obs = out.next_observations;
    }
    ue_se.iter_mut().for_each(|s| *s /= steps as f64);
    Ok(EpisodeRecord {
        episode,
        sum_se: ue_se.iter().sum(),
        ue_se,
        power_watts: power / steps as f64,
        max_user_power,
        critic_loss: (!losses.is_empty()).then(|| losses.iter().sum::<f64>() / losses.len() as f64),
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// The environment whose successive layouts [`evaluate`] visits.
pub fn evaluation_environment(network: &NetworkConfig, evaluation_seed: u64) -> Result<Environment, TrainError> {
    Environment::new(network.clone(), seed::derive(evaluation_seed, "layout"), seed::derive(evaluation_seed, "channel"))
}

/// Channel seed [`evaluate`] uses for evaluation layout `layout`.
pub fn evaluation_channel_seed(evaluation_seed: u64, layout: usize) -> u64 {
    seed::derive_indexed(seed::derive(evaluation_seed, "channel"), layout as u64)
}

/// Runs the frozen `policy` (no exploration, no updates) on `layouts` fresh
/// layouts drawn from `evaluation_seed`, estimating SE with `n_mc`
/// realizations per layout.
pub fn evaluate(
    policy: &mut dyn Policy,
    network: &NetworkConfig,
    combiner: Combiner,
    layouts: usize,
    n_mc: usize,
    evaluation_seed: u64,
) -> Result<EvalLog, TrainError> {
    let mut env = evaluation_environment(network, evaluation_seed)?;
    let ns = network.ue_antennas();
    let mut log = EvalLog::new(policy.method(), network.num_ue);
    for layout in 0..layouts {
        let obs = env.observations();
        policy.begin_episode(&obs)?;
        let actions = policy.act(&obs, 0.0)?;
        let powers = action_to_power(&actions, network, policy.action_floor())?;
        let stats = env.evaluate(&powers, combiner, n_mc, evaluation_channel_seed(evaluation_seed, layout))?;
        log.records.push(EvalRecord {
            layout,
            sum_se: stats.sum_se(),
            ue_se: stats.se,
            power_watts: powers.total(ns),
        });
        env.redraw()?;
    }
    Ok(log)
}
