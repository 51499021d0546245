//! Labeled sub-seeds derived from one master seed.
//!
//! Every source of randomness in an experiment (layout, channel, network
//! initialization, exploration, replay sampling, evaluation) gets its own
//! stream so that one can be held fixed while another varies.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the crate.
pub type Rng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Derives a child seed from a parent seed and a label.
pub fn derive(parent: u64, label: &str) -> u64 {
    splitmix64(splitmix64(parent) ^ fnv1a(label))
}

/// Derives a child seed from a parent seed and an index.
pub fn derive_indexed(parent: u64, index: u64) -> u64 {
    splitmix64(splitmix64(parent ^ 0xA5A5_A5A5_5A5A_5A5A).wrapping_add(splitmix64(index)))
}

/// Builds a generator from a seed.
pub fn rng(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// The per-purpose seeds of one experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSet {
    pub layout: u64,
    pub channel: u64,
    pub init: u64,
    pub exploration: u64,
    pub replay: u64,
    pub evaluation: u64,
}

impl SeedSet {
    pub fn from_master(master: u64) -> Self {
        Self {
            layout: derive(master, "layout"),
            channel: derive(master, "channel"),
            init: derive(master, "init"),
            exploration: derive(master, "exploration"),
            replay: derive(master, "replay"),
            evaluation: derive(master, "evaluation"),
        }
    }
}
