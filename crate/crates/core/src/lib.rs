//! Cell-free extremely-large-scale MIMO uplink simulation and power control.
//!
//! The crate is organized bottom-up:
//!
//! * [`env`] places base stations and users, draws large-scale fading with a
//!   wrap-around geometry, and samples near-field small-scale fading from a
//!   Fourier plane-wave expansion.
//! * [`receivers`] builds MR and local MMSE combiners and estimates the
//!   per-user uplink spectral efficiency by Monte-Carlo averaging.
//! * [`fuzzy`] maps `K` real agents onto `m` fuzzy agents and back.
//! * [`rl`] holds the small feed-forward networks, replay buffer and
//!   actor-critic gradient machinery.
//! * [`trainers`] runs FL-CTCE, FL-CTDE, plain MADDPG and the fixed-power
//!   baselines against the environment.
//! * [`harness`] loads experiment configs and writes CSV/JSON artifacts.

pub mod env;
pub mod fuzzy;
pub mod harness;
mod linalg;
pub mod receivers;
pub mod rl;
pub mod seed;
pub mod trainers;

pub use nalgebra::Complex;

/// Complex double used for every channel and combiner entry.
pub type C64 = Complex<f64>;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
