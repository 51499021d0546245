use std::ops::Range;

use nalgebra::DMatrix;

use super::fl_ctce::FuzzyFront;
use super::nets::{MultiDdpg, Transition};
use super::{Method, Policy, TrainError, FUZZY_ACTION_FLOOR};
use crate::fuzzy::FuzzyConfig;
use crate::rl::{Checkpoint, Hyperparams, ReplayBuffer};
use crate::seed::{self, Rng, SeedSet};

/// Fuzzy centralized training, decentralized execution: fuzzy agent `i`
/// acts from its own fuzzy state through a local actor; a joint critic
/// is trained on all fuzzy agents' buffers with their local rewards.
pub struct FlCtde {
    front: FuzzyFront,
    core: MultiDdpg,
    buffers: Vec<ReplayBuffer<Transition>>,
    batch_size: usize,
    explore: Rng,
    replay: Rng,
}

impl FlCtde {
    pub fn new(num_agents: usize, fuzzy: FuzzyConfig, hyper: &Hyperparams, seeds: &SeedSet) -> Result<Self, TrainError> {
        hyper.validate()?;
        let front = FuzzyFront::new(num_agents, fuzzy, seeds.init)?;
        let mut init = seed::rng(seeds.init);
        let core = MultiDdpg::new(fuzzy.m, fuzzy.d_s, fuzzy.d_a, hyper, &mut init);
        Ok(Self {
            front,
            core,
            buffers: (0..fuzzy.m).map(|_| ReplayBuffer::new(hyper.buffer_capacity)).collect(),
            batch_size: hyper.batch_size,
            explore: seed::rng(seeds.exploration),
            replay: seed::rng(seeds.replay),
        })
    }

    /// Transitions drawn from each fuzzy agent's buffer per update.
    pub fn per_agent_batch(&self) -> usize {
        (self.batch_size / self.buffers.len()).max(1)
    }
}

impl Policy for FlCtde {
    fn method(&self) -> Method {
        Method::FlCtde
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
        self.front.defuzzify(fuzzy_actions)
    }

    fn observe(&mut self, rewards: &[f64], next_observations: &DMatrix<f64>) -> Result<Option<f64>, TrainError> {
        let (state, action, r_hat, next_state) = self.front.step(rewards, next_observations)?;
        for (buffer, &reward) in self.buffers.iter_mut().zip(&r_hat) {
            buffer.push(Transition { state: state.clone(), action: action.clone(), reward, next_state: next_state.clone() });
        }
        if !self.buffers[0].is_ready(self.batch_size) {
            return Ok(None);
        }
        let per_agent = self.per_agent_batch();
        let mut batch = Vec::with_capacity(per_agent * self.buffers.len());
        let mut groups: Vec<Range<usize>> = Vec::with_capacity(self.buffers.len());
        for buffer in &self.buffers {
            let start = batch.len();
            batch.extend(buffer.sample(per_agent, &mut self.replay)?);
            groups.push(start..batch.len());
        }
        self.core.update(&batch, Some(&groups)).map(Some)
    }

    fn checkpoint(&self) -> Checkpoint {
        let mut c = Checkpoint::new();
        self.core.checkpoint(&mut c);
        c
    }
}
