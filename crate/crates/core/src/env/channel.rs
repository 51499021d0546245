use super::{EnvError, LsfMatrix, SmallScaleSampler};
use crate::{seed, CMatrix, C64};

/// One draw of every `G_mk`, stored `m * K + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    num_ue: usize,
    channels: Vec<CMatrix>,
}

impl ChannelRealization {
    pub fn new(num_bs: usize, num_ue: usize, channels: Vec<CMatrix>) -> Self {
        assert_eq!(channels.len(), num_bs * num_ue, "expected one matrix per BS/UE pair");
        Self { num_ue, channels }
    }

    pub fn num_bs(&self) -> usize {
        self.channels.len() / self.num_ue
    }

    pub fn num_ue(&self) -> usize {
        self.num_ue
    }

    /// `G_mk`.
    pub fn get(&self, bs: usize, ue: usize) -> &CMatrix {
        &self.channels[bs * self.num_ue + ue]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.channels
    }
}

/// A Monte-Carlo batch of channel realizations sharing one LSF matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub realizations: Vec<ChannelRealization>,
    pub lsf: LsfMatrix,
}

impl ChannelSet {
    pub fn num_bs(&self) -> usize {
        self.lsf.num_bs()
    }

    pub fn num_ue(&self) -> usize {
        self.lsf.num_ue()
    }

    pub fn len(&self) -> usize {
        self.realizations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.realizations.is_empty()
    }

    /// `(N_r, N_s)` of the stored matrices.
    pub fn dims(&self) -> (usize, usize) {
        self.realizations[0].get(0, 0).shape()
    }
}

/// Scales small-scale draws by `sqrt(beta_mk)`. Each entry of `draws` holds
/// one `H_mk` per BS/UE pair, ordered `m * K + k`.
pub fn assemble_channel(lsf: &LsfMatrix, draws: Vec<Vec<CMatrix>>) -> Result<ChannelSet, EnvError> {
    if draws.is_empty() {
        return Err(EnvError::NoRealizations);
    }
    let (m, k) = (lsf.num_bs(), lsf.num_ue());
    let mut realizations = Vec::with_capacity(draws.len());
    for mut draw in draws {
        if draw.len() != m * k {
            return Err(EnvError::LayoutMismatch(format!("draw has {} matrices, expected {}", draw.len(), m * k)));
        }
        for (idx, h) in draw.iter_mut().enumerate() {
            *h *= C64::from(lsf.beta[(idx / k, idx % k)].sqrt());
        }
        realizations.push(ChannelRealization::new(m, k, draw));
    }
    Ok(ChannelSet { realizations, lsf: lsf.clone() })
}

/// Draws `n_mc` realizations. Realization `i` uses its own generator seeded
/// from `(base_seed, i)`, so the batch does not depend on generation order.
pub fn generate_channels(
    sampler: &SmallScaleSampler,
    lsf: &LsfMatrix,
    n_mc: usize,
    base_seed: u64,
) -> Result<ChannelSet, EnvError> {
    if n_mc == 0 {
        return Err(EnvError::NoRealizations);
    }
    let draws = (0..n_mc)
        .map(|i| sampler.sample(&mut seed::rng(seed::derive_indexed(base_seed, i as u64))))
        .collect();
    assemble_channel(lsf, draws)
}
