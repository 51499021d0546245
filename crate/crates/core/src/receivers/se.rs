use nalgebra::Cholesky;

use super::{CombinerSet, PowerAllocation, ReceiverError};
use crate::env::ChannelSet;
use crate::linalg::cmul_acc;
use crate::{CMatrix, C64};

/// Relative diagonal loading applied when `Psi_k` is numerically singular.
pub const PSI_REGULARIZATION: f64 = 1e-12;

/// Per-user signal term `E_k`, interference-plus-noise term `Psi_k` and
/// spectral efficiency in bit/s/Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct SeStatistics {
    pub signal: Vec<CMatrix>,
    pub interference: Vec<CMatrix>,
    pub se: Vec<f64>,
    /// Users whose `Psi_k` needed diagonal loading.
    pub regularized: Vec<usize>,
}

impl SeStatistics {
    pub fn sum_se(&self) -> f64 {
        self.se.iter().sum()
    }
}

/// Monte-Carlo estimate of the achievable uplink SE when the CPU averages
/// the local estimates of all `M` base stations:
///
/// ```text
/// B_kl   = (1/M) sum_m V_mk^H G_ml
/// E_k    = sqrt(p_k) E{B_kk}
/// Psi_k  = sum_l p_l E{B_kl B_kl^H} - E_k E_k^H + (sigma^2 / M^2) sum_m E{V_mk^H V_mk}
/// SE_k   = log2 det(I + E_k^H Psi_k^-1 E_k)
/// ```
///
/// Expectations are sample means over the realizations of `channels`.
pub fn estimate_se(
    channels: &ChannelSet,
    combiner: &CombinerSet,
    powers: &PowerAllocation,
    noise_power: f64,
) -> Result<SeStatistics, ReceiverError> {
    if channels.is_empty() {
        return Err(ReceiverError::Empty);
    }
    if combiner.len() != channels.len() || combiner.num_ue() != channels.num_ue() {
        return Err(ReceiverError::Dimension(format!(
            "combiner has {} realizations for {} users, channels {} for {}",
            combiner.len(),
            combiner.num_ue(),
            channels.len(),
            channels.num_ue()
        )));
    }
    if powers.num_ue() != channels.num_ue() {
        return Err(ReceiverError::Dimension(format!("{} powers for {} users", powers.num_ue(), channels.num_ue())));
    }
    let (num_bs, num_ue) = (channels.num_bs(), channels.num_ue());
    let (nr, ns) = channels.dims();
    let avg = C64::from(1.0 / num_bs as f64);

    let mut mean_b = vec![CMatrix::zeros(ns, ns); num_ue];
    let mut second_moment = vec![CMatrix::zeros(ns, ns); num_ue];
    let mut noise = vec![CMatrix::zeros(ns, ns); num_ue];

    let mut v_stack = CMatrix::zeros(nr, num_ue * ns);
    let mut g_stack = CMatrix::zeros(nr, num_ue * ns);
    for (r, realization) in channels.realizations.iter().enumerate() {
        let mut cross = CMatrix::zeros(num_ue * ns, num_ue * ns);
        let mut self_gram = vec![CMatrix::zeros(ns, ns); num_ue];
        for m in 0..num_bs {
            for k in 0..num_ue {
                let v = combiner.get(r, m, k);
                if v.shape() != (nr, ns) {
                    return Err(ReceiverError::Dimension(format!("combiner shape {:?}, expected {:?}", v.shape(), (nr, ns))));
                }
                v_stack.columns_mut(k * ns, ns).copy_from(v);
                g_stack.columns_mut(k * ns, ns).copy_from(realization.get(m, k));
                self_gram[k] += v.adjoint() * v;
            }
            // cross[(k, l) block] accumulates V_mk^H G_ml
            cmul_acc(&mut cross, &v_stack.adjoint(), &g_stack);
        }
        cross *= avg;
        for k in 0..num_ue {
            mean_b[k] += cross.view((k * ns, k * ns), (ns, ns));
            for l in 0..num_ue {
                let b = cross.view((k * ns, l * ns), (ns, ns));
                second_moment[k] += (b * b.adjoint()) * C64::from(powers.get(l));
            }
            noise[k] += &self_gram[k] * (avg * avg * noise_power);
        }
    }

    let inv_n = C64::from(1.0 / channels.len() as f64);
    let mut stats = SeStatistics {
        signal: Vec::with_capacity(num_ue),
        interference: Vec::with_capacity(num_ue),
        se: Vec::with_capacity(num_ue),
        regularized: Vec::new(),
    };
    for k in 0..num_ue {
        let e = &mean_b[k] * (inv_n * powers.get(k).sqrt());
        let mut psi = (&second_moment[k] + &noise[k]) * inv_n - &e * e.adjoint();
        psi = (&psi + psi.adjoint()) * C64::from(0.5);
        let (se, loaded) = log2_det_sinr(&e, &psi);
        if loaded {
            stats.regularized.push(k);
        }
        stats.signal.push(e);
        stats.interference.push(psi);
        stats.se.push(se);
    }
    Ok(stats)
}

/// `log2 det(I + E^H Psi^-1 E)` via Cholesky factors. Returns whether
/// `Psi` needed diagonal loading.
fn log2_det_sinr(e: &CMatrix, psi: &CMatrix) -> (f64, bool) {
    if e.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return (0.0, false);
    }
    let n = psi.nrows();
    let (chol, loaded) = match Cholesky::new(psi.clone()) {
        Some(c) if c.l_dirty().diagonal().iter().all(|d| d.re > 0.0) => (c, false),
        _ => {
            let scale = (psi.trace().re / n as f64).abs().max(f64::MIN_POSITIVE);
            let mut loaded = psi.clone();
            let eps = PSI_REGULARIZATION * scale;
            for i in 0..n {
                loaded[(i, i)] += C64::from(eps);
            }
            let mut c = Cholesky::new(loaded.clone());
            let mut bump = eps;
            while c.is_none() {
                bump *= 10.0;
                for i in 0..n {
                    loaded[(i, i)] += C64::from(bump);
                }
                c = Cholesky::new(loaded.clone());
            }
            (c.expect("loaded until positive definite"), true)
        }
    };
    let x = chol.l().solve_lower_triangular(e).expect("non-singular factor");
    let mut gram = x.adjoint() * x;
    for i in 0..gram.nrows() {
        gram[(i, i)] += C64::from(1.0);
    }
    let gram = (&gram + gram.adjoint()) * C64::from(0.5);
    let l = Cholesky::new(gram).expect("I + X^H X is positive definite").l();
    let ln_det: f64 = l.diagonal().iter().map(|d| 2.0 * d.re.ln()).sum();
    (ln_det / std::f64::consts::LN_2, loaded)
}
