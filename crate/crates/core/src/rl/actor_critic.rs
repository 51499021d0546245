use std::ops::Range;

use nalgebra::DMatrix;

use super::{Gradients, Mlp, RlError};

/// A mini-batch for the critic, one transition per column. `next_actions`
/// are the target policy's actions at `next_states`.
#[derive(Debug, Clone)]
pub struct CriticBatch {
    pub states: DMatrix<f64>,
    pub actions: DMatrix<f64>,
    pub rewards: Vec<f64>,
    pub next_states: DMatrix<f64>,
    pub next_actions: DMatrix<f64>,
}

impl CriticBatch {
    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }
}

fn stack(top: &DMatrix<f64>, bottom: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(top.nrows() + bottom.nrows(), top.ncols());
    out.rows_mut(0, top.nrows()).copy_from(top);
    out.rows_mut(top.nrows(), bottom.nrows()).copy_from(bottom);
    out
}

/// Mean squared Bellman error `mean (Q(s, a) - y)^2` with
/// `y = r + gamma * Q_target(s', a')`, and its gradient with respect to the
/// evaluation critic. The target is a constant: nothing flows through `y`.
pub fn critic_loss_and_grad(
    critic: &Mlp,
    critic_target: &Mlp,
    batch: &CriticBatch,
    gamma: f64,
) -> Result<(f64, Gradients), RlError> {
    let n = batch.len();
    if n == 0 || batch.states.ncols() != n || batch.actions.ncols() != n || batch.next_states.ncols() != n {
        return Err(RlError::Dimension { expected: n.max(1), got: batch.states.ncols() });
    }
    let targets: Vec<f64> = if gamma == 0.0 {
        batch.rewards.clone()
    } else {
        let next_q = critic_target.forward_batch(&stack(&batch.next_states, &batch.next_actions))?;
        batch.rewards.iter().zip(next_q.output().iter()).map(|(r, q)| r + gamma * q).collect()
    };
    let cache = critic.forward_batch(&stack(&batch.states, &batch.actions))?;
    let q = cache.output();
    let mut loss = 0.0;
    let mut upstream = DMatrix::zeros(1, n);
    for j in 0..n {
        let err = q[(0, j)] - targets[j];
        loss += err * err;
        upstream[(0, j)] = 2.0 * err / n as f64;
    }
    let (grads, _) = critic.backward(&cache, &upstream);
    Ok((loss / n as f64, grads))
}

/// Deterministic policy gradient for the actor whose outputs occupy rows
/// `slot` of the joint action. The actor's fresh outputs replace that slot;
/// the other rows of `joint_actions` are held fixed. Returns the gradient of
/// `-mean Q` (a descent direction) and the mean `Q`.
pub fn policy_gradient(
    actor: &Mlp,
    actor_inputs: &DMatrix<f64>,
    critic: &Mlp,
    critic_states: &DMatrix<f64>,
    joint_actions: &DMatrix<f64>,
    slot: Range<usize>,
) -> Result<(Gradients, f64), RlError> {
    let n = actor_inputs.ncols();
    if slot.len() != actor.output_dim() || slot.end > joint_actions.nrows() {
        return Err(RlError::Dimension { expected: actor.output_dim(), got: slot.len() });
    }
    let actor_cache = actor.forward_batch(actor_inputs)?;
    let mut actions = joint_actions.clone();
    actions.rows_mut(slot.start, slot.len()).copy_from(actor_cache.output());
    let critic_cache = critic.forward_batch(&stack(critic_states, &actions))?;
    let mean_q = critic_cache.output().sum() / n as f64;
    let upstream = DMatrix::from_element(1, n, -1.0 / n as f64);
    let (_, d_input) = critic.backward(&critic_cache, &upstream);
    let d_action = d_input.rows(critic_states.nrows() + slot.start, slot.len()).into_owned();
    let (grads, _) = actor.backward(&actor_cache, &d_action);
    Ok((grads, mean_q))
}

/// `target <- (1 - tau) * target + tau * eval`, elementwise.
pub fn soft_update(target: &mut Mlp, eval: &Mlp, tau: f64) -> Result<(), RlError> {
    if !target.same_shape(eval) {
        return Err(RlError::ShapeMismatch);
    }
    for (t, e) in target.layers.iter_mut().zip(&eval.layers) {
        t.weights.zip_apply(&e.weights, |a, b| *a = (1.0 - tau) * *a + tau * b);
        t.bias.zip_apply(&e.bias, |a, b| *a = (1.0 - tau) * *a + tau * b);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rl::{Activation, Adam};
    use crate::seed;
    use nalgebra::DVector;
    use rand::Rng;

    fn batch(n: usize, ds: usize, da: usize, rng: &mut impl Rng) -> CriticBatch {
        let mut m = |r: usize| DMatrix::from_fn(r, n, |_, _| rng.random_range(-1.0..1.0));
        CriticBatch {
            states: m(ds),
            actions: m(da),
            next_states: m(ds),
            next_actions: m(da),
            rewards: (0..n).map(|i| i as f64 * 0.3 - 0.2).collect(),
        }
    }

    #[test]
    fn zero_discount_targets_rewards() {
        let mut rng = seed::rng(1);
        let critic = Mlp::critic(4, &mut rng);
        let b = batch(5, 3, 1, &mut rng);
        // a target net of the wrong size would fail if it were evaluated
        let bogus = Mlp::critic(1, &mut rng);
        let (loss, _) = critic_loss_and_grad(&critic, &bogus, &b, 0.0).unwrap();
        let q = critic.forward_batch(&stack(&b.states, &b.actions)).unwrap();
        let expect: f64 = (0..5).map(|j| (q.output()[(0, j)] - b.rewards[j]).powi(2)).sum::<f64>() / 5.0;
        assert!((loss - expect).abs() < 1e-15);
    }

    #[test]
    fn perfect_fit_has_zero_loss_and_gradient() {
        // Q(s, a) = s + a, target critic identical, gamma = 0.5
        let critic = Mlp::single(DMatrix::from_row_slice(1, 2, &[1.0, 1.0]), DVector::zeros(1), Activation::Identity);
        let states = DMatrix::from_row_slice(1, 2, &[1.0, 2.0]);
        let actions = DMatrix::from_row_slice(1, 2, &[0.5, -1.0]);
        let next_states = DMatrix::from_row_slice(1, 2, &[0.0, 1.0]);
        let next_actions = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        // y = r + 0.5 * (s' + a') must equal s + a
        let rewards = vec![1.5 - 0.5, 1.0 - 1.0];
        let b = CriticBatch { states, actions, rewards, next_states, next_actions };
        let (loss, g) = critic_loss_and_grad(&critic, &critic, &b, 0.5).unwrap();
        assert_eq!(loss, 0.0);
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn two_transition_scalar_loss_by_hand() {
        // Q(s, a) = 2s + 3a + 1, Q'(s, a) = s - a
        let critic = Mlp::single(DMatrix::from_row_slice(1, 2, &[2.0, 3.0]), DVector::from_element(1, 1.0), Activation::Identity);
        let target = Mlp::single(DMatrix::from_row_slice(1, 2, &[1.0, -1.0]), DVector::zeros(1), Activation::Identity);
        let b = CriticBatch {
            states: DMatrix::from_row_slice(1, 2, &[1.0, 0.0]),
            actions: DMatrix::from_row_slice(1, 2, &[0.0, 1.0]),
            rewards: vec![1.0, 2.0],
            next_states: DMatrix::from_row_slice(1, 2, &[2.0, 1.0]),
            next_actions: DMatrix::from_row_slice(1, 2, &[1.0, 3.0]),
        };
        // Q = (3, 4); y = (1 + 0.9 * 1, 2 + 0.9 * -2) = (1.9, 0.2)
        // errors (1.1, 3.8); loss = (1.21 + 14.44) / 2 = 7.825
        let (loss, g) = critic_loss_and_grad(&critic, &target, &b, 0.9).unwrap();
        assert!((loss - 7.825).abs() < 1e-12);
        // dL/dW = mean 2 e x: s: (2*1.1*1 + 0) / 2 = 1.1; a: (0 + 2*3.8*1) / 2 = 3.8; b: (2.2 + 7.6) / 2 = 4.9
        assert!((g.layers[0].0[(0, 0)] - 1.1).abs() < 1e-12);
        assert!((g.layers[0].0[(0, 1)] - 3.8).abs() < 1e-12);
        assert!((g.layers[0].1[0] - 4.9).abs() < 1e-12);
    }

    #[test]
    fn constant_critic_gives_zero_actor_gradient() {
        let mut rng = seed::rng(3);
        let actor = Mlp::actor(2, 1, &mut rng);
        let critic = Mlp::single(DMatrix::from_row_slice(1, 3, &[0.4, -0.2, 0.0]), DVector::zeros(1), Activation::Identity);
        let s = DMatrix::from_fn(2, 4, |i, j| (i + j) as f64 * 0.1);
        let (g, _) = policy_gradient(&actor, &s, &critic, &s, &DMatrix::zeros(1, 4), 0..1).unwrap();
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn linear_actor_with_q_equal_action() {
        // a = w s + b, Q(s, a) = a: descent gradient is -(s, 1) averaged
        let actor = Mlp::single(DMatrix::from_element(1, 1, 0.3), DVector::from_element(1, 0.1), Activation::Identity);
        let critic = Mlp::single(DMatrix::from_row_slice(1, 2, &[0.0, 1.0]), DVector::zeros(1), Activation::Identity);
        let s = DMatrix::from_row_slice(1, 2, &[2.0, 4.0]);
        let (g, q) = policy_gradient(&actor, &s, &critic, &s, &DMatrix::zeros(1, 2), 0..1).unwrap();
        assert!((g.layers[0].0[(0, 0)] + 3.0).abs() < 1e-15);
        assert!((g.layers[0].1[0] + 1.0).abs() < 1e-15);
        assert!((q - (0.3 * 3.0 + 0.1)).abs() < 1e-15);
    }

    #[test]
    fn other_slots_do_not_leak_into_an_actors_gradient() {
        let mut rng = seed::rng(4);
        let actor_i = Mlp::actor(2, 1, &mut rng);
        let critic = Mlp::critic(4 + 2, &mut rng);
        let states = DMatrix::from_fn(4, 8, |_, _| rng.random_range(-1.0..1.0));
        let local = states.rows(0, 2).into_owned();
        let buffer_actions = DMatrix::from_fn(2, 8, |_, _| rng.random_range(0.0..1.0));
        let (g1, _) = policy_gradient(&actor_i, &local, &critic, &states, &buffer_actions, 0..1).unwrap();
        // agent j's actor changed: its fresh outputs never enter agent i's update
        let _perturbed_j = Mlp::actor(2, 1, &mut rng);
        let (g2, _) = policy_gradient(&actor_i, &local, &critic, &states, &buffer_actions, 0..1).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn soft_update_limits_and_contraction() {
        let mut rng = seed::rng(5);
        let eval = Mlp::actor(3, 2, &mut rng);
        let start = Mlp::actor(3, 2, &mut rng);

        let mut t = start.clone();
        soft_update(&mut t, &eval, 0.0).unwrap();
        assert_eq!(t, start);
        let mut t = eval.clone();
        soft_update(&mut t, &eval, 0.3).unwrap();
        for (a, e) in t.params_flat().iter().zip(eval.params_flat()) {
            assert!((a - e).abs() <= 1e-15 * e.abs());
        }
        let mut t = start.clone();
        soft_update(&mut t, &eval, 1.0).unwrap();
        assert_eq!(t, eval);

        let tau = 0.01;
        let mut t = start.clone();
        soft_update(&mut t, &eval, tau).unwrap();
        for ((a, b), e) in start.params_flat().iter().zip(t.params_flat()).zip(eval.params_flat()) {
            assert!(((b - e).abs() - (1.0 - tau) * (a - e).abs()).abs() < 1e-15);
        }
        let mut wrong = Mlp::actor(4, 2, &mut rng);
        assert_eq!(soft_update(&mut wrong, &eval, tau), Err(RlError::ShapeMismatch));
    }

    #[test]
    fn critic_fits_a_frozen_random_function() {
        let mut rng = seed::rng(6);
        let teacher = Mlp::new(&[3, 16, 1], Activation::Tanh, Activation::Identity, 1.0, &mut rng);
        let mut critic = Mlp::critic(3, &mut rng);
        let mut opt = Adam::new(&critic, 1e-3);
        let inputs = DMatrix::from_fn(3, 100, |_, _| rng.random_range(-1.0..1.0));
        let y = teacher.forward_batch(&inputs).unwrap().output().clone();
        let b = CriticBatch {
            states: inputs.rows(0, 2).into_owned(),
            actions: inputs.rows(2, 1).into_owned(),
            rewards: y.iter().copied().collect(),
            next_states: DMatrix::zeros(2, 100),
            next_actions: DMatrix::zeros(1, 100),
        };
        let (initial, _) = critic_loss_and_grad(&critic, &critic.clone(), &b, 0.0).unwrap();
        let mut last = initial;
        for _ in 0..2000 {
            let (loss, g) = critic_loss_and_grad(&critic, &critic.clone(), &b, 0.0).unwrap();
            opt.step(&mut critic, &g);
            last = loss;
        }
        assert!(last <= 0.1 * initial, "loss {initial} -> {last}");
    }
}
