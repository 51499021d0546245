use nalgebra::DMatrix;
use rand::Rng as _;

use super::{Method, Policy, TrainError};
use crate::rl::Checkpoint;
use crate::seed::{self, Rng};

/// Every user transmits at full power.
#[derive(Debug, Clone)]
pub struct FullPower {
    num_agents: usize,
}

impl FullPower {
    pub fn new(num_agents: usize) -> Self {
        Self { num_agents }
    }
}

impl Policy for FullPower {
    fn method(&self) -> Method {
        Method::FullPower
    }

    fn action_floor(&self) -> f64 {
        0.0
    }

    fn begin_episode(&mut self, _observations: &DMatrix<f64>) -> Result<(), TrainError> {
        Ok(())
    }

    fn act(&mut self, _observations: &DMatrix<f64>, _noise: f64) -> Result<Vec<f64>, TrainError> {
        Ok(vec![1.0; self.num_agents])
    }

    fn observe(&mut self, _rewards: &[f64], _next: &DMatrix<f64>) -> Result<Option<f64>, TrainError> {
        Ok(None)
    }

    fn checkpoint(&self) -> Checkpoint {
        Checkpoint::new()
    }
}

/// Actions drawn uniformly from `[0, 1]` at the start of every episode and
/// held for its steps.
#[derive(Debug, Clone)]
pub struct RandomPower {
    num_agents: usize,
    rng: Rng,
    actions: Vec<f64>,
}

impl RandomPower {
    pub fn new(num_agents: usize, seed: u64) -> Self {
        Self { num_agents, rng: seed::rng(seed), actions: Vec::new() }
    }
}

impl Policy for RandomPower {
    fn method(&self) -> Method {
        Method::RandomPower
    }

    fn action_floor(&self) -> f64 {
        0.0
    }

    fn begin_episode(&mut self, _observations: &DMatrix<f64>) -> Result<(), TrainError> {
        self.actions = (0..self.num_agents).map(|_| self.rng.random::<f64>()).collect();
        Ok(())
    }

    fn act(&mut self, _observations: &DMatrix<f64>, _noise: f64) -> Result<Vec<f64>, TrainError> {
        Ok(self.actions.clone())
    }

    fn observe(&mut self, _rewards: &[f64], _next: &DMatrix<f64>) -> Result<Option<f64>, TrainError> {
        Ok(None)
    }

    fn checkpoint(&self) -> Checkpoint {
        Checkpoint::new()
    }
}
