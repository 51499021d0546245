//! Fuzzy-agent abstraction.
//!
//! `K` real agents are represented by `m <= K` fuzzy agents. Each fuzzy
//! agent `i` holds a fuzzy state `s_hat_i` whose entries are the centers of
//! its fuzzy sets, one per observation dimension. An agent's similarity to
//! a fuzzy agent is the product of exponential memberships over all
//! observation dimensions:
//!
//! ```text
//! u(x; c)   = exp(-|x - c| / (d_a * m))
//! mu_k^i    = prod_j u(s_k[j]; s_hat_i[j])
//! ```
//!
//! Two normalizations of `mu` are kept. Row weights (normalized over fuzzy
//! agents) turn fuzzy actions into agent actions; column weights
//! (normalized over agents) turn agent rewards and next states into fuzzy
//! rewards and next fuzzy states. Both are convex combinations.

use nalgebra::DMatrix;
use rand::seq::index;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FuzzyError {
    #[error("cannot draw {m} fuzzy agents from {k} agents")]
    TooManyFuzzyAgents { m: usize, k: usize },
    #[error("invalid fuzzy config: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Number of fuzzy agents and per-agent observation/action sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzyConfig {
    pub m: usize,
    pub d_s: usize,
    pub d_a: usize,
}

impl FuzzyConfig {
    pub fn validate(&self, num_agents: usize) -> Result<(), FuzzyError> {
        if self.m == 0 || self.d_s == 0 || self.d_a == 0 {
            return Err(FuzzyError::InvalidConfig(format!("m, d_s, d_a must be >= 1, got {self:?}")));
        }
        if self.m > num_agents {
            return Err(FuzzyError::TooManyFuzzyAgents { m: self.m, k: num_agents });
        }
        Ok(())
    }

    fn scale(&self) -> f64 {
        (self.d_a * self.m) as f64
    }
}

/// Membership of `x` in the fuzzy set centered at `center`.
pub fn membership(center: f64, x: f64, d_a: usize, m: usize) -> f64 {
    (-(x - center).abs() / (d_a * m) as f64).exp()
}

/// Picks `m` distinct agent rows (without replacement) as initial fuzzy states.
pub fn init_fuzzy_states<R: Rng + ?Sized>(
    agent_states: &DMatrix<f64>,
    m: usize,
    rng: &mut R,
) -> Result<DMatrix<f64>, FuzzyError> {
    let k = agent_states.nrows();
    if m > k || m == 0 {
        return Err(FuzzyError::TooManyFuzzyAgents { m, k });
    }
    let picks = index::sample(rng, k, m);
    Ok(DMatrix::from_fn(m, agent_states.ncols(), |i, j| agent_states[(picks.index(i), j)]))
}

/// Agent-to-fuzzy-agent weights, each `K x m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MappingWeights {
    /// Unnormalized products of memberships.
    pub raw: DMatrix<f64>,
    /// Rows sum to one (over fuzzy agents); used for defuzzification.
    pub row: DMatrix<f64>,
    /// Columns sum to one (over agents); used for fuzzification.
    pub col: DMatrix<f64>,
}

/// Computes the membership products and both normalizations.
///
/// Normalization is done in the log domain so that far-apart states cannot
/// underflow every weight of a row or column to zero.
pub fn mapping_weights(
    agent_states: &DMatrix<f64>,
    fuzzy_states: &DMatrix<f64>,
    config: &FuzzyConfig,
) -> Result<MappingWeights, FuzzyError> {
    if agent_states.ncols() != config.d_s || fuzzy_states.ncols() != config.d_s || fuzzy_states.nrows() != config.m {
        return Err(FuzzyError::Dimension(format!(
            "agent states {:?}, fuzzy states {:?}, config {:?}",
            agent_states.shape(),
            fuzzy_states.shape(),
            config
        )));
    }
    let (k, m) = (agent_states.nrows(), config.m);
    let log_mu = DMatrix::from_fn(k, m, |a, i| {
        let dist: f64 = agent_states.row(a).iter().zip(fuzzy_states.row(i).iter()).map(|(x, c)| (x - c).abs()).sum();
        -dist / config.scale()
    });
    let raw = log_mu.map(f64::exp);

    let mut row = DMatrix::zeros(k, m);
    for a in 0..k {
        let max = log_mu.row(a).max();
        let exps: Vec<f64> = log_mu.row(a).iter().map(|l| (l - max).exp()).collect();
        let total: f64 = exps.iter().sum();
        for i in 0..m {
            row[(a, i)] = exps[i] / total;
        }
    }
    let mut col = DMatrix::zeros(k, m);
    for i in 0..m {
        let max = log_mu.column(i).max();
        let exps: Vec<f64> = log_mu.column(i).iter().map(|l| (l - max).exp()).collect();
        let total: f64 = exps.iter().sum();
        for a in 0..k {
            col[(a, i)] = exps[a] / total;
        }
    }
    Ok(MappingWeights { raw, row, col })
}

/// `a_k = sum_i row[k, i] * a_hat_i`; `fuzzy_actions` is `m x d_a`.
pub fn defuzzify_actions(fuzzy_actions: &DMatrix<f64>, weights: &MappingWeights) -> DMatrix<f64> {
    &weights.row * fuzzy_actions
}

/// `r_hat_i = sum_k col[k, i] * r_k`.
pub fn fuzzify_rewards(agent_rewards: &[f64], weights: &MappingWeights) -> Vec<f64> {
    (0..weights.col.ncols())
        .map(|i| weights.col.column(i).iter().zip(agent_rewards).map(|(w, r)| w * r).sum())
        .collect()
}

/// `s_hat_i = sum_k col[k, i] * s_k`, per dimension; returns `m x d_s`.
pub fn fuzzify_states(next_agent_states: &DMatrix<f64>, weights: &MappingWeights) -> DMatrix<f64> {
    weights.col.transpose() * next_agent_states
}

/// Fuzzy states together with the mapping weights of the current step.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySystem {
    pub config: FuzzyConfig,
    pub fuzzy_states: DMatrix<f64>,
    pub weights: MappingWeights,
}

impl FuzzySystem {
    /// Samples initial fuzzy states from the agents' observations.
    pub fn new<R: Rng + ?Sized>(config: FuzzyConfig, agent_states: &DMatrix<f64>, rng: &mut R) -> Result<Self, FuzzyError> {
        config.validate(agent_states.nrows())?;
        let fuzzy_states = init_fuzzy_states(agent_states, config.m, rng)?;
        let weights = mapping_weights(agent_states, &fuzzy_states, &config)?;
        Ok(Self { config, fuzzy_states, weights })
    }

    /// Fuzzy states and rewards for the next step, from the current weights.
    pub fn fuzzify(&self, agent_rewards: &[f64], next_agent_states: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
        (fuzzify_rewards(agent_rewards, &self.weights), fuzzify_states(next_agent_states, &self.weights))
    }

    /// Moves the fuzzy-set centers to `next_fuzzy_states` and recomputes the
    /// weights against the agents' new observations.
    pub fn advance(&mut self, next_fuzzy_states: DMatrix<f64>, next_agent_states: &DMatrix<f64>) -> Result<(), FuzzyError> {
        self.weights = mapping_weights(next_agent_states, &next_fuzzy_states, &self.config)?;
        self.fuzzy_states = next_fuzzy_states;
        Ok(())
    }

    pub fn defuzzify(&self, fuzzy_actions: &DMatrix<f64>) -> DMatrix<f64> {
        defuzzify_actions(fuzzy_actions, &self.weights)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use proptest::prelude::*;

    fn cfg(m: usize, d_s: usize) -> FuzzyConfig {
        FuzzyConfig { m, d_s, d_a: 1 }
    }

    #[test]
    fn membership_values() {
        assert_eq!(membership(0.3, 0.3, 1, 2), 1.0);
        assert!((membership(1.0, 1.0 + 6.0, 2, 3) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((membership(0.0, 0.5, 1, 2) - 0.778_800_783_071_404_9).abs() < 1e-12);
    }

    #[test]
    fn init_samples_without_replacement() {
        let states = DMatrix::from_fn(5, 2, |i, j| (10 * i + j) as f64);
        let all = init_fuzzy_states(&states, 5, &mut seed::rng(3)).unwrap();
        let mut rows: Vec<f64> = all.column(0).iter().copied().collect();
        rows.sort_by(f64::total_cmp);
        assert_eq!(rows, vec![0.0, 10.0, 20.0, 30.0, 40.0]);
        let one = init_fuzzy_states(&states, 1, &mut seed::rng(3)).unwrap();
        assert_eq!(one.nrows(), 1);
        assert_eq!(one[(0, 1)], one[(0, 0)] + 1.0);
        assert_eq!(one, init_fuzzy_states(&states, 1, &mut seed::rng(3)).unwrap());
        assert_eq!(
            init_fuzzy_states(&states, 6, &mut seed::rng(3)),
            Err(FuzzyError::TooManyFuzzyAgents { m: 6, k: 5 })
        );
    }

    #[test]
    fn worked_two_dimensional_example() {
        let agent = DMatrix::from_row_slice(1, 2, &[0.0, 0.0]);
        let fuzzy = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let w = mapping_weights(&agent, &fuzzy, &cfg(2, 2)).unwrap();
        assert!((w.raw[(0, 0)] - (-0.5f64).exp()).abs() < 1e-15);
        assert!((w.raw[(0, 1)] - (-1.0f64).exp()).abs() < 1e-15);
        assert!((w.row[(0, 0)] - 0.6225).abs() < 1e-4);
        assert!((w.row[(0, 1)] - 0.3775).abs() < 1e-4);
        let a = defuzzify_actions(&DMatrix::from_row_slice(2, 1, &[0.0, 1.0]), &w);
        assert!((a[(0, 0)] - w.row[(0, 1)]).abs() < 1e-15);
    }

    #[test]
    fn equidistant_fuzzy_states_split_evenly() {
        let agent = DMatrix::from_row_slice(1, 1, &[0.0]);
        let fuzzy = DMatrix::from_row_slice(2, 1, &[-1.0, 1.0]);
        let w = mapping_weights(&agent, &fuzzy, &cfg(2, 1)).unwrap();
        assert_eq!((w.row[(0, 0)], w.row[(0, 1)]), (0.5, 0.5));
    }

    #[test]
    fn far_fuzzy_agents_lose_all_weight() {
        let agent = DMatrix::from_row_slice(1, 1, &[0.0]);
        let mut prev = 0.0;
        for far in [1.0, 10.0, 100.0, 1e4] {
            let fuzzy = DMatrix::from_row_slice(2, 1, &[0.0, far]);
            let w = mapping_weights(&agent, &fuzzy, &cfg(2, 1)).unwrap();
            assert!(w.row[(0, 0)] >= prev);
            prev = w.row[(0, 0)];
        }
        assert!(prev > 1.0 - 1e-12);
    }

    #[test]
    fn fuzzification_examples() {
        // column weights (0.7, 0.3) for fuzzy agent 1
        let w = MappingWeights {
            raw: DMatrix::from_element(2, 1, 1.0),
            row: DMatrix::from_element(2, 1, 1.0),
            col: DMatrix::from_row_slice(2, 1, &[0.7, 0.3]),
        };
        assert!((fuzzify_rewards(&[1.0, 0.0], &w)[0] - 0.7).abs() < 1e-15);
        let next = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 4.0]);
        let s = fuzzify_states(&next, &w);
        assert!((s[(0, 0)] - 0.7).abs() < 1e-15 && (s[(0, 1)] - 2.6).abs() < 1e-15);
    }

    #[test]
    fn single_agent_passthrough() {
        let agent = DMatrix::from_row_slice(1, 3, &[0.1, -0.4, 2.0]);
        let sys = FuzzySystem::new(FuzzyConfig { m: 1, d_s: 3, d_a: 1 }, &agent, &mut seed::rng(1)).unwrap();
        let (r, s) = sys.fuzzify(&[3.5], &agent);
        assert_eq!(r, vec![3.5]);
        assert_eq!(s, agent);
    }

    #[test]
    fn single_fuzzy_agent_defuzzifies_to_its_action() {
        let agents = DMatrix::from_fn(4, 2, |i, j| (i as f64) - (j as f64) * 0.3);
        let sys = FuzzySystem::new(FuzzyConfig { m: 1, d_s: 2, d_a: 2 }, &agents, &mut seed::rng(1)).unwrap();
        let a = sys.defuzzify(&DMatrix::from_row_slice(1, 2, &[0.25, 0.75]));
        for k in 0..4 {
            assert_eq!((a[(k, 0)], a[(k, 1)]), (0.25, 0.75));
        }
    }

    #[test]
    fn identical_agents_give_identical_fuzzy_states() {
        let agents = DMatrix::from_fn(3, 2, |_, j| j as f64 + 0.5);
        let sys = FuzzySystem::new(cfg(2, 2), &agents, &mut seed::rng(1)).unwrap();
        let (_, s) = sys.fuzzify(&[1.0, 2.0, 3.0], &agents);
        for i in 0..2 {
            assert!((s[(i, 0)] - 0.5).abs() < 1e-15 && (s[(i, 1)] - 1.5).abs() < 1e-15);
        }
    }

    fn states(k: usize, d: usize) -> impl Strategy<Value = DMatrix<f64>> {
        prop::collection::vec(-3.0f64..3.0, k * d).prop_map(move |v| DMatrix::from_row_slice(k, d, &v))
    }

    proptest! {
        #[test]
        fn weights_are_normalized(agents in states(6, 3), fuzzy in states(3, 3)) {
            let w = mapping_weights(&agents, &fuzzy, &cfg(3, 3)).unwrap();
            for a in 0..6 {
                prop_assert!((w.row.row(a).sum() - 1.0).abs() < 1e-12);
            }
            for i in 0..3 {
                prop_assert!((w.col.column(i).sum() - 1.0).abs() < 1e-12);
            }
            prop_assert!(w.raw.iter().all(|x| *x > 0.0));
        }

        #[test]
        fn defuzzified_actions_stay_in_range(
            agents in states(5, 2),
            fuzzy in states(3, 2),
            actions in prop::collection::vec(0.0f64..1.0, 3),
        ) {
            let w = mapping_weights(&agents, &fuzzy, &cfg(3, 2)).unwrap();
            let a = defuzzify_actions(&DMatrix::from_column_slice(3, 1, &actions), &w);
            let lo = actions.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = actions.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for v in a.iter() {
                prop_assert!(*v >= lo - 1e-12 && *v <= hi + 1e-12);
            }
        }

        #[test]
        fn permuting_fuzzy_agents_is_equivariant(
            agents in states(4, 2),
            fuzzy in states(3, 2),
            actions in prop::collection::vec(0.0f64..1.0, 3),
            rewards in prop::collection::vec(-5.0f64..5.0, 4),
        ) {
            let perm = [2usize, 0, 1];
            let fuzzy_p = DMatrix::from_fn(3, 2, |i, j| fuzzy[(perm[i], j)]);
            let actions_p: Vec<f64> = perm.iter().map(|&i| actions[i]).collect();
            let w = mapping_weights(&agents, &fuzzy, &cfg(3, 2)).unwrap();
            let wp = mapping_weights(&agents, &fuzzy_p, &cfg(3, 2)).unwrap();
            let a = defuzzify_actions(&DMatrix::from_column_slice(3, 1, &actions), &w);
            let ap = defuzzify_actions(&DMatrix::from_column_slice(3, 1, &actions_p), &wp);
            prop_assert!((a - ap).abs().max() < 1e-12);
            let r = fuzzify_rewards(&rewards, &w);
            let rp = fuzzify_rewards(&rewards, &wp);
            let s = fuzzify_states(&agents, &w);
            let sp = fuzzify_states(&agents, &wp);
            for i in 0..3 {
                prop_assert!((rp[i] - r[perm[i]]).abs() < 1e-12);
                prop_assert!((sp[(i, 0)] - s[(perm[i], 0)]).abs() < 1e-12);
            }
        }

        #[test]
        fn membership_decreases_with_distance(c in -3.0f64..3.0, d1 in 0.0f64..5.0, extra in 1e-6f64..5.0) {
            prop_assert!(membership(c, c + d1 + extra, 1, 2) < membership(c, c + d1, 1, 2));
        }
    }
}
