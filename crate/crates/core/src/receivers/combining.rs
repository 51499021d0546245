use nalgebra::Cholesky;
use serde::{Deserialize, Serialize};

use super::{PowerAllocation, ReceiverError};
use crate::env::ChannelSet;
use crate::linalg::cmul;
use crate::{CMatrix, C64};

/// Receive combining scheme applied at every BS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Combiner {
    Mr,
    Lmmse,
}

impl Combiner {
    pub const ALL: [Combiner; 2] = [Combiner::Mr, Combiner::Lmmse];

    pub fn name(self) -> &'static str {
        match self {
            Combiner::Mr => "mr",
            Combiner::Lmmse => "lmmse",
        }
    }
}

/// `V_mk` for every realization, stored per realization as `m * K + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinerSet {
    num_ue: usize,
    pub realizations: Vec<Vec<CMatrix>>,
}

impl CombinerSet {
    pub fn new(num_ue: usize, realizations: Vec<Vec<CMatrix>>) -> Self {
        Self { num_ue, realizations }
    }

    pub fn get(&self, realization: usize, bs: usize, ue: usize) -> &CMatrix {
        &self.realizations[realization][bs * self.num_ue + ue]
    }

    pub fn get_mut(&mut self, realization: usize, bs: usize, ue: usize) -> &mut CMatrix {
        &mut self.realizations[realization][bs * self.num_ue + ue]
    }

    pub fn num_ue(&self) -> usize {
        self.num_ue
    }

    pub fn len(&self) -> usize {
        self.realizations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.realizations.is_empty()
    }
}

/// Maximum-ratio combining: `V_mk = G_mk`.
pub fn mr_combining(channels: &ChannelSet) -> CombinerSet {
    CombinerSet::new(
        channels.num_ue(),
        channels.realizations.iter().map(|r| r.matrices().to_vec()).collect(),
    )
}

/// Local MMSE combining,
/// `V_mk = p_k (sum_l p_l G_ml G_ml^H + sigma^2 I)^-1 G_mk`,
/// computed per BS with one Cholesky factorization and a multi-RHS solve.
pub fn lmmse_combining(
    channels: &ChannelSet,
    powers: &PowerAllocation,
    noise_power: f64,
) -> Result<CombinerSet, ReceiverError> {
    if !(noise_power > 0.0) {
        return Err(ReceiverError::NonPositiveNoise(noise_power));
    }
    let (num_bs, num_ue) = (channels.num_bs(), channels.num_ue());
    if powers.num_ue() != num_ue {
        return Err(ReceiverError::Dimension(format!("{} powers for {} users", powers.num_ue(), num_ue)));
    }
    if channels.is_empty() {
        return Err(ReceiverError::Empty);
    }
    let (nr, ns) = channels.dims();
    let mut out = Vec::with_capacity(channels.len());
    for (r_idx, realization) in channels.realizations.iter().enumerate() {
        let mut combiners = vec![CMatrix::zeros(nr, ns); num_bs * num_ue];
        for m in 0..num_bs {
            let mut stacked = CMatrix::zeros(nr, num_ue * ns);
            let mut weighted = CMatrix::zeros(nr, num_ue * ns);
            for k in 0..num_ue {
                let g = realization.get(m, k);
                stacked.columns_mut(k * ns, ns).copy_from(g);
                weighted.columns_mut(k * ns, ns).copy_from(&(g * C64::from(powers.get(k).sqrt())));
            }
            if stacked.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(ReceiverError::SolveFailed { realization: r_idx, bs: m });
            }
            let mut cov = cmul(&weighted, &weighted.adjoint());
            for i in 0..nr {
                cov[(i, i)] += C64::from(noise_power);
            }
            let chol = Cholesky::new(cov).ok_or(ReceiverError::SolveFailed { realization: r_idx, bs: m })?;
            let solved = chol.solve(&stacked);
            for k in 0..num_ue {
                combiners[m * num_ue + k] = solved.columns(k * ns, ns) * C64::from(powers.get(k));
            }
        }
        out.push(combiners);
    }
    Ok(CombinerSet::new(num_ue, out))
}

/// Dispatches on the combining scheme.
pub fn combine(
    combiner: Combiner,
    channels: &ChannelSet,
    powers: &PowerAllocation,
    noise_power: f64,
) -> Result<CombinerSet, ReceiverError> {
    match combiner {
        Combiner::Mr => Ok(mr_combining(channels)),
        Combiner::Lmmse => lmmse_combining(channels, powers, noise_power),
    }
}
