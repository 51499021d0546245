use serde::{Deserialize, Serialize};

use super::RlError;

/// Learning hyperparameters shared by every actor-critic trainer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Hyperparams {
    pub gamma: f64,
    pub tau: f64,
    pub actor_lr: f64,
    pub critic_lr: f64,
    pub batch_size: usize,
    pub buffer_capacity: usize,
    /// Standard deviation of the Gaussian exploration noise at the first episode.
    pub noise_start: f64,
    /// ... and at the last episode; the scale decays exponentially in between.
    pub noise_end: f64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self {
            gamma: 0.9,
            tau: 0.01,
            actor_lr: 1e-4,
            critic_lr: 1e-3,
            batch_size: 64,
            buffer_capacity: 10_000,
            noise_start: 0.2,
            noise_end: 0.01,
        }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<(), RlError> {
        let bad = |field, reason: &str| Err(RlError::InvalidHyperparam { field, reason: reason.into() });
        if !(0.0..1.0).contains(&self.gamma) {
            return bad("gamma", "must lie in [0, 1)");
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return bad("tau", "must lie in (0, 1]");
        }
        if !(self.actor_lr > 0.0 && self.actor_lr.is_finite()) {
            return bad("actor_lr", "must be positive");
        }
        if !(self.critic_lr > 0.0 && self.critic_lr.is_finite()) {
            return bad("critic_lr", "must be positive");
        }
        if self.batch_size == 0 {
            return bad("batch_size", "must be at least 1");
        }
        if self.buffer_capacity < self.batch_size {
            return bad("buffer_capacity", "must hold at least one batch");
        }
        if !(self.noise_start >= 0.0 && self.noise_end >= 0.0) {
            return bad("noise_start", "noise scales must be non-negative");
        }
        Ok(())
    }

    /// Exploration scale for `episode` out of `episodes`.
    pub fn noise_scale(&self, episode: usize, episodes: usize) -> f64 {
        if episodes <= 1 || self.noise_start == 0.0 || self.noise_end == 0.0 {
            return if episode == 0 { self.noise_start } else { self.noise_end };
        }
        let frac = episode as f64 / (episodes - 1) as f64;
        self.noise_start * (self.noise_end / self.noise_start).powf(frac)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        Hyperparams::default().validate().unwrap();
    }

    #[test]
    fn out_of_range_values_are_rejected() {
        let h = Hyperparams { gamma: 1.0, ..Hyperparams::default() };
        assert!(matches!(h.validate(), Err(RlError::InvalidHyperparam { field: "gamma", .. })));
        let h = Hyperparams { tau: 0.0, ..Hyperparams::default() };
        assert!(h.validate().is_err());
        let h = Hyperparams { buffer_capacity: 8, ..Hyperparams::default() };
        assert!(h.validate().is_err());
    }

    #[test]
    fn noise_decays_from_start_to_end() {
        let h = Hyperparams::default();
        assert!((h.noise_scale(0, 100) - 0.2).abs() < 1e-15);
        assert!((h.noise_scale(99, 100) - 0.01).abs() < 1e-15);
        assert!(h.noise_scale(50, 100) < 0.2 && h.noise_scale(50, 100) > 0.01);
    }
}
