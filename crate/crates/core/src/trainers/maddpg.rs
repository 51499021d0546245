use nalgebra::DMatrix;

use super::nets::{MultiDdpg, Transition};
use super::{Method, Policy, TrainError};
use crate::rl::{Checkpoint, Hyperparams, ReplayBuffer};
use crate::seed::{self, Rng, SeedSet};

/// Plain MADDPG: one actor per user on its raw observation, one joint critic.
pub struct Maddpg {
    core: MultiDdpg,
    buffer: ReplayBuffer<Transition>,
    batch_size: usize,
    explore: Rng,
    replay: Rng,
    last: Option<(Vec<f64>, Vec<f64>)>,
}

fn flatten(observations: &DMatrix<f64>) -> Vec<f64> {
    observations.transpose().as_slice().to_vec()
}

impl Maddpg {
    pub fn new(num_agents: usize, obs_dim: usize, hyper: &Hyperparams, seeds: &SeedSet) -> Self {
        let mut init = seed::rng(seeds.init);
        Self {
            core: MultiDdpg::new(num_agents, obs_dim, 1, hyper, &mut init),
            buffer: ReplayBuffer::new(hyper.buffer_capacity),
            batch_size: hyper.batch_size,
            explore: seed::rng(seeds.exploration),
            replay: seed::rng(seeds.replay),
            last: None,
        }
    }

    pub fn num_actors(&self) -> usize {
        self.core.num_actors()
    }
}

impl Policy for Maddpg {
    fn method(&self) -> Method {
        Method::Maddpg
    }

    fn action_floor(&self) -> f64 {
        0.0
    }

    fn begin_episode(&mut self, _observations: &DMatrix<f64>) -> Result<(), TrainError> {
        Ok(())
    }

    fn act(&mut self, observations: &DMatrix<f64>, noise: f64) -> Result<Vec<f64>, TrainError> {
        let state = flatten(observations);
        if state.len() != self.core.state_dim() {
            return Err(TrainError::Rl(crate::rl::RlError::Dimension {
                expected: self.core.state_dim(),
                got: state.len(),
            }));
        }
        let action = self.core.act(&state, noise, &mut self.explore)?;
        self.last = Some((state, action.clone()));
        Ok(action)
    }

    fn observe(&mut self, rewards: &[f64], next_observations: &DMatrix<f64>) -> Result<Option<f64>, TrainError> {
        let (state, action) =
            self.last.take().ok_or_else(|| TrainError::NonFinite("observe called before act".into()))?;
        let reward = rewards.iter().sum::<f64>() / rewards.len() as f64;
        self.buffer.push(Transition { state, action, reward, next_state: flatten(next_observations) });
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
