use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::TrainError;
use crate::env::{
    generate_channels, large_scale_fading, place_network, LsfMatrix, NetworkConfig, NetworkLayout, SmallScaleSampler,
    SpectralProfile,
};
use crate::receivers::{combine, estimate_se, capped, Combiner, PowerAllocation, SeStatistics};
use crate::seed::{self, Rng};

/// Lowest action the fuzzy controllers may map to power.
pub const FUZZY_ACTION_FLOOR: f64 = 0.05;

/// How per-agent rewards are built from the per-user SE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardKind {
    /// Every agent receives the network sum-SE.
    SumSe,
    /// Agent `k` receives its own SE.
    PerUe,
}

/// Per-user observations, `K x M`: `clip((beta_dB + 90) / 30, -3, 3)`.
pub fn build_observations(lsf: &LsfMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(lsf.num_ue(), lsf.num_bs(), |k, m| ((lsf.beta_db(m, k) + 90.0) / 30.0).clamp(-3.0, 3.0))
}

/// `p_k = max(a_k, a_min) * P_max / N_s`, rounded down so that
/// `N_s * p_k <= P_max` holds exactly.
pub fn action_to_power(actions: &[f64], config: &NetworkConfig, a_min: f64) -> Result<PowerAllocation, TrainError> {
    let ns = config.ue_antennas();
    let per_antenna = actions
        .iter()
        .enumerate()
        .map(|(agent, &a)| {
            if !(0.0..=1.0).contains(&a) {
                return Err(TrainError::InvalidAction { agent, value: a });
            }
            Ok(capped(a.max(a_min) * config.p_max / ns as f64, ns, config.p_max))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PowerAllocation::new(per_antenna, ns, config.p_max)?)
}

/// Result of one environment step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub rewards: Vec<f64>,
    pub stats: SeStatistics,
    pub next_observations: DMatrix<f64>,
}

/// A network whose users and large-scale fading are redrawn after every step.
#[derive(Debug, Clone)]
pub struct Environment {
    config: NetworkConfig,
    profile: SpectralProfile,
    layout: NetworkLayout,
    lsf: LsfMatrix,
    sampler: SmallScaleSampler,
    layout_rng: Rng,
    channel_seed: u64,
    steps: u64,
}

impl Environment {
    pub fn new(config: NetworkConfig, layout_seed: u64, channel_seed: u64) -> Result<Self, TrainError> {
        config.validate()?;
        let mut layout_rng = seed::rng(layout_seed);
        let profile = SpectralProfile::for_config(&config);
        let layout = place_network(&config, &mut layout_rng)?;
        let lsf = large_scale_fading(&layout, &config, &mut layout_rng)?;
        let sampler = SmallScaleSampler::new(&profile, &layout);
        Ok(Self { config, profile, layout, lsf, sampler, layout_rng, channel_seed, steps: 0 })
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.config
    }

    pub fn layout(&self) -> &NetworkLayout {
        &self.layout
    }

    pub fn lsf(&self) -> &LsfMatrix {
        &self.lsf
    }

    pub fn observations(&self) -> DMatrix<f64> {
        build_observations(&self.lsf)
    }

    /// New user positions and large-scale fading.
    pub fn redraw(&mut self) -> Result<(), TrainError> {
        self.layout.redraw_users(&self.config, &mut self.layout_rng);
        self.lsf = large_scale_fading(&self.layout, &self.config, &mut self.layout_rng)?;
        self.sampler = SmallScaleSampler::new(&self.profile, &self.layout);
        Ok(())
    }

    /// SE of the current layout under `powers`, averaged over `n_mc`
    /// realizations drawn from `channel_seed`.
    pub fn evaluate(
        &self,
        powers: &PowerAllocation,
        combiner: Combiner,
        n_mc: usize,
        channel_seed: u64,
    ) -> Result<SeStatistics, TrainError> {
        let channels = generate_channels(&self.sampler, &self.lsf, n_mc, channel_seed)?;
        let v = combine(combiner, &channels, powers, self.config.noise_power)?;
        let stats = estimate_se(&channels, &v, powers, self.config.noise_power)?;
        if stats.se.iter().any(|s| !s.is_finite()) {
            return Err(TrainError::NonFinite(format!("SE {:?}", stats.se)));
        }
        Ok(stats)
    }

    /// Scores `powers` on the current layout, then redraws the layout.
    pub fn step(
        &mut self,
        powers: &PowerAllocation,
        combiner: Combiner,
        n_mc: usize,
        reward: RewardKind,
    ) -> Result<StepOutcome, TrainError> {
        let stats = self.evaluate(powers, combiner, n_mc, seed::derive_indexed(self.channel_seed, self.steps))?;
        self.steps += 1;
        let rewards = match reward {
            RewardKind::SumSe => vec![stats.sum_se(); stats.se.len()],
            RewardKind::PerUe => stats.se.clone(),
        };
        self.redraw()?;
        Ok(StepOutcome { rewards, stats, next_observations: self.observations() })
    }
}

/// One environment step: rewards for `powers` on the current layout and the
/// observations after the environment update.
pub fn env_step(
    env: &mut Environment,
    powers: &PowerAllocation,
    combiner: Combiner,
    n_mc: usize,
    reward: RewardKind,
) -> Result<StepOutcome, TrainError> {
    env.step(powers, combiner, n_mc, reward)
}
