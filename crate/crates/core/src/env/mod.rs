//! Network geometry, large-scale fading and near-field small-scale fading.

mod channel;
mod config;
mod lattice;
mod layout;
mod lsf;
mod small_scale;

pub use channel::{assemble_channel, generate_channels, ChannelRealization, ChannelSet};
pub use config::NetworkConfig;
pub use lattice::{steering_matrix, wavenumber_lattice, WavenumberLattice};
pub use layout::{place_network, NetworkLayout};
pub use lsf::{large_scale_fading, pathloss_db, wrapped_distance, LsfMatrix};
pub use small_scale::{sample_small_scale, SmallScaleSampler, SpectralProfile};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EnvError {
    #[error("invalid network config: {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error("layout does not match config: {0}")]
    LayoutMismatch(String),
    #[error("at least one channel realization is required")]
    NoRealizations,
}

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Converts dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Converts a linear power ratio to dB.
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Converts dB to a linear power ratio.
pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
