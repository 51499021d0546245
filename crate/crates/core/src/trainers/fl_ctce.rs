use nalgebra::DMatrix;

use super::nets::{MultiDdpg, Transition};
use super::{Method, Policy, TrainError, FUZZY_ACTION_FLOOR};
use crate::fuzzy::{FuzzyConfig, FuzzySystem};
use crate::rl::{Checkpoint, Hyperparams, ReplayBuffer};
use crate::seed::{self, Rng, SeedSet};

/// Fuzzy layer shared by the two fuzzy trainers: holds the fuzzy states,
/// the current mapping weights and the last fuzzy step.
pub(super) struct FuzzyFront {
    config: FuzzyConfig,
    num_agents: usize,
    system: Option<FuzzySystem>,
    rng: Rng,
    state: Vec<f64>,
    fuzzy_actions: Vec<f64>,
}

impl FuzzyFront {
    pub fn new(num_agents: usize, config: FuzzyConfig, init_seed: u64) -> Result<Self, TrainError> {
        config.validate(num_agents)?;
        Ok(Self {
            config,
            num_agents,
            system: None,
            rng: seed::rng(seed::derive(init_seed, "fuzzy")),
            state: Vec::new(),
            fuzzy_actions: Vec::new(),
        })
    }

    fn system(&self) -> Result<&FuzzySystem, TrainError> {
        self.system.as_ref().ok_or_else(|| TrainError::NonFinite("fuzzy states used before the first episode".into()))
    }

    pub fn begin(&mut self, observations: &DMatrix<f64>) -> Result<(), TrainError> {
        self.system = Some(FuzzySystem::new(self.config, observations, &mut self.rng)?);
        Ok(())
    }

    /// Fuzzy states flattened fuzzy-agent-major: agent `i` owns entries
    /// `i * d_s .. (i + 1) * d_s`.
    pub fn joint_state(&mut self) -> Result<Vec<f64>, TrainError> {
        let s = &self.system()?.fuzzy_states;
        self.state = s.transpose().as_slice().to_vec();
        Ok(self.state.clone())
    }

    /// Agent actions from fuzzy actions (`m` entries, `d_a = 1`).
    pub fn defuzzify(&mut self, fuzzy_actions: Vec<f64>) -> Result<Vec<f64>, TrainError> {
        let a_hat = DMatrix::from_column_slice(fuzzy_actions.len(), 1, &fuzzy_actions);
        let actions = self.system()?.defuzzify(&a_hat).iter().map(|a| a.clamp(0.0, 1.0)).collect();
        self.fuzzy_actions = fuzzy_actions;
        Ok(actions)
    }

    /// Fuzzifies the step outcome, moves the fuzzy states, and returns
    /// `(joint state, fuzzy actions, fuzzy rewards, next joint state)`.
    pub fn step(
        &mut self,
        rewards: &[f64],
        next_observations: &DMatrix<f64>,
    ) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>), TrainError> {
        if rewards.len() != self.num_agents {
            return Err(TrainError::Fuzzy(crate::fuzzy::FuzzyError::Dimension(format!(
                "{} rewards for {} agents",
                rewards.len(),
                self.num_agents
            ))));
        }
        let system = self.system.as_mut().ok_or_else(|| TrainError::NonFinite("no fuzzy states".into()))?;
        let (r_hat, next) = system.fuzzify(rewards, next_observations);
        let next_state = next.transpose().as_slice().to_vec();
        system.advance(next, next_observations)?;
        Ok((std::mem::take(&mut self.state), std::mem::take(&mut self.fuzzy_actions), r_hat, next_state))
    }
}

/// Fuzzy centralized training, centralized execution: one joint actor maps
/// all fuzzy states to all fuzzy actions; one joint critic.
pub struct FlCtce {
    front: FuzzyFront,
    core: MultiDdpg,
    buffer: ReplayBuffer<Transition>,
    batch_size: usize,
    explore: Rng,
    replay: Rng,
    last_fuzzy_actions: Vec<f64>,
}

impl FlCtce {
    pub fn new(num_agents: usize, fuzzy: FuzzyConfig, hyper: &Hyperparams, seeds: &SeedSet) -> Result<Self, TrainError> {
        hyper.validate()?;
        let front = FuzzyFront::new(num_agents, fuzzy, seeds.init)?;
        let mut init = seed::rng(seeds.init);
        let core = MultiDdpg::new(1, fuzzy.m * fuzzy.d_s, fuzzy.m * fuzzy.d_a, hyper, &mut init);
        Ok(Self {
            front,
            core,
            buffer: ReplayBuffer::new(hyper.buffer_capacity),
            batch_size: hyper.batch_size,
            explore: seed::rng(seeds.exploration),
            replay: seed::rng(seeds.replay),
            last_fuzzy_actions: Vec::new(),
        })
    }

    /// Fuzzy actions of the most recent [`Policy::act`] call.
    pub fn last_fuzzy_actions(&self) -> &[f64] {
        &self.last_fuzzy_actions
    }

    pub fn replay_len(&self) -> usize {
        self.buffer.len()
    }
}

impl Policy for FlCtce {
    fn method(&self) -> Method {
        Method::FlCtce
    }

    fn action_floor(&self) -> f64 {
        FUZZY_ACTION_FLOOR
    }

    fn begin_episode(&mut self, observations: &DMatrix<f64>) -> Result<(), TrainError> {
        self.front.begin(observations)
    }

    fn act(&mut self, _observations: &DMatrix<f64>, noise: f64) -> Result<Vec<f64>, TrainError> {
        let state = self.front.joint_state()?;
        let fuzzy_actions = self.core.act(&state, noise, &mut self.explore)?;
        self.last_fuzzy_actions.clone_from(&fuzzy_actions);
        self.front.defuzzify(fuzzy_actions)
    }

    fn observe(&mut self, rewards: &[f64], next_observations: &DMatrix<f64>) -> Result<Option<f64>, TrainError> {
        let (state, action, r_hat, next_state) = self.front.step(rewards, next_observations)?;
        let reward = r_hat.iter().sum::<f64>() / r_hat.len() as f64;
        self.buffer.push(Transition { state, action, reward, next_state });
        if !self.buffer.is_ready(self.batch_size) {
            return Ok(None);
        }
        let batch = self.buffer.sample(self.batch_size, &mut self.replay)?;
        self.core.update(&batch, None).map(Some)
    }

    fn checkpoint(&self) -> Checkpoint {
        let mut c = Checkpoint::new();
        self.core.checkpoint(&mut c);
        c
    }
}
