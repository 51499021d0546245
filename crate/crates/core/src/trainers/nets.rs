use std::ops::Range;

use nalgebra::DMatrix;
use rand_distr::{Distribution, Normal};

use super::TrainError;
use crate::rl::{critic_loss_and_grad, policy_gradient, soft_update, Adam, Checkpoint, CriticBatch, Hyperparams, Mlp};
use crate::seed::Rng;

/// One stored transition over the joint (fuzzy or raw) state and action.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Transition {
    pub state: Vec<f64>,
    pub action: Vec<f64>,
    pub reward: f64,
    pub next_state: Vec<f64>,
}

struct Actor {
    net: Mlp,
    target: Mlp,
    opt: Adam,
}

/// Several actors over disjoint slices of the joint state and action,
/// trained against one joint critic.
pub(crate) struct MultiDdpg {
    actors: Vec<Actor>,
    state_dim: usize,
    action_dim: usize,
    critic: Mlp,
    critic_target: Mlp,
    critic_opt: Adam,
    hyper: Hyperparams,
}

fn columns<'a>(rows: usize, items: impl ExactSizeIterator<Item = &'a [f64]>) -> DMatrix<f64> {
    let n = items.len();
    let mut out = DMatrix::zeros(rows, n);
    for (j, col) in items.enumerate() {
        out.column_mut(j).copy_from_slice(col);
    }
    out
}

fn select_columns(m: &DMatrix<f64>, rows: Range<usize>, cols: Range<usize>) -> DMatrix<f64> {
    m.view((rows.start, cols.start), (rows.len(), cols.len())).into_owned()
}

impl MultiDdpg {
    /// `n` actors, each reading `d_in` state entries and writing `d_out`
    /// action entries of the joint vectors.
    pub fn new(n: usize, d_in: usize, d_out: usize, hyper: &Hyperparams, rng: &mut Rng) -> Self {
        let actors = (0..n)
            .map(|_| {
                let net = Mlp::actor(d_in, d_out, rng);
                Actor { target: net.clone(), opt: Adam::new(&net, hyper.actor_lr), net }
            })
            .collect();
        let (state_dim, action_dim) = (n * d_in, n * d_out);
        let critic = Mlp::critic(state_dim + action_dim, rng);
        Self {
            actors,
            state_dim,
            action_dim,
            critic_target: critic.clone(),
            critic_opt: Adam::new(&critic, hyper.critic_lr),
            critic,
            hyper: hyper.clone(),
        }
    }

    pub fn num_actors(&self) -> usize {
        self.actors.len()
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    fn input_slot(&self, i: usize) -> Range<usize> {
        let d = self.state_dim / self.actors.len();
        i * d..(i + 1) * d
    }

    fn output_slot(&self, i: usize) -> Range<usize> {
        let d = self.action_dim / self.actors.len();
        i * d..(i + 1) * d
    }

    /// Joint action with Gaussian noise of scale `noise`, clipped to `[0, 1]`.
    /// No random draws are made when `noise` is zero.
    pub fn act(&self, state: &[f64], noise: f64, rng: &mut Rng) -> Result<Vec<f64>, TrainError> {
        let mut action = Vec::with_capacity(self.action_dim);
        for (i, actor) in self.actors.iter().enumerate() {
            action.extend(actor.net.forward(&state[self.input_slot(i)])?);
        }
        if noise > 0.0 {
            let normal = Normal::new(0.0, noise).map_err(|e| TrainError::NonFinite(e.to_string()))?;
            for a in &mut action {
                *a += normal.sample(rng);
            }
        }
        for a in &mut action {
            if !a.is_finite() {
                return Err(TrainError::NonFinite("actor output".into()));
            }
            *a = a.clamp(0.0, 1.0);
        }
        Ok(action)
    }

    /// One critic step over `batch`, then one policy step per actor and the
    /// soft target updates. Actor `i` is trained on the columns
    /// `groups[i]` of the batch, or on the whole batch when `groups` is
    /// `None`. Returns the critic loss.
    pub fn update(&mut self, batch: &[&Transition], groups: Option<&[Range<usize>]>) -> Result<f64, TrainError> {
        let n = batch.len();
        let states = columns(self.state_dim, batch.iter().map(|t| t.state.as_slice()));
        let actions = columns(self.action_dim, batch.iter().map(|t| t.action.as_slice()));
        let next_states = columns(self.state_dim, batch.iter().map(|t| t.next_state.as_slice()));
        let mut next_actions = DMatrix::zeros(self.action_dim, n);
        for (i, actor) in self.actors.iter().enumerate() {
            let input = select_columns(&next_states, self.input_slot(i), 0..n);
            let out = actor.target.forward_batch(&input)?;
            let slot = self.output_slot(i);
            next_actions.rows_mut(slot.start, slot.len()).copy_from(out.output());
        }
        let critic_batch = CriticBatch {
            states,
            actions,
            rewards: batch.iter().map(|t| t.reward).collect(),
            next_states,
            next_actions,
        };
        let (loss, grads) = critic_loss_and_grad(&self.critic, &self.critic_target, &critic_batch, self.hyper.gamma)?;
        if !loss.is_finite() {
            return Err(TrainError::NonFinite("critic loss".into()));
        }
        self.critic_opt.step(&mut self.critic, &grads);

        for i in 0..self.actors.len() {
            let cols = groups.map_or(0..n, |g| g[i].clone());
            let inputs = select_columns(&critic_batch.states, self.input_slot(i), cols.clone());
            let joint_states = select_columns(&critic_batch.states, 0..self.state_dim, cols.clone());
            let joint_actions = select_columns(&critic_batch.actions, 0..self.action_dim, cols);
            let slot = self.output_slot(i);
            let actor = &mut self.actors[i];
            let (g, _) = policy_gradient(&actor.net, &inputs, &self.critic, &joint_states, &joint_actions, slot)?;
            actor.opt.step(&mut actor.net, &g);
        }

        soft_update(&mut self.critic_target, &self.critic, self.hyper.tau)?;
        for actor in &mut self.actors {
            soft_update(&mut actor.target, &actor.net, self.hyper.tau)?;
        }
        Ok(loss)
    }

    pub fn checkpoint(&self, into: &mut Checkpoint) {
        for (i, actor) in self.actors.iter().enumerate() {
            into.add_mlp(&format!("actor.{i}"), &actor.net);
            into.add_mlp(&format!("actor_target.{i}"), &actor.target);
        }
        into.add_mlp("critic", &self.critic);
        into.add_mlp("critic_target", &self.critic_target);
    }
}
