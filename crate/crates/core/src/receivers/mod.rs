//! Uplink combining and spectral-efficiency estimation.

mod combining;
mod power;
mod se;

pub use combining::{combine, lmmse_combining, mr_combining, Combiner, CombinerSet};
pub use power::PowerAllocation;
pub(crate) use power::capped;
pub use se::{estimate_se, SeStatistics};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ReceiverError {
    #[error("power allocation violates N_s * p_k <= P_max for user {ue}: {total} W > {p_max} W")]
    PowerCap { ue: usize, total: f64, p_max: f64 },
    #[error("invalid power for user {ue}: {value}")]
    InvalidPower { ue: usize, value: f64 },
    #[error("noise power must be positive, got {0}")]
    NonPositiveNoise(f64),
    #[error("L-MMSE solve failed at BS {bs} in realization {realization}: covariance not positive definite or not finite")]
    SolveFailed { realization: usize, bs: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("at least one realization is required")]
    Empty,
}
