use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{steering_matrix, wavenumber_lattice, NetworkConfig, NetworkLayout, WavenumberLattice};
use crate::linalg::cmul;
use crate::{CMatrix, C64};

/// Receive/transmit lattices and the variance of every Fourier coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile {
    pub lattice_r: WavenumberLattice,
    pub lattice_s: WavenumberLattice,
    /// `|lattice_r| x |lattice_s|`, summing to one.
    pub variances: DMatrix<f64>,
}

impl SpectralProfile {
    /// Uniform variance over every lattice pair.
    pub fn isotropic(lattice_r: WavenumberLattice, lattice_s: WavenumberLattice) -> Self {
        let (lr, ls) = (lattice_r.len(), lattice_s.len());
        let variances = DMatrix::from_element(lr, ls, 1.0 / (lr * ls) as f64);
        Self { lattice_r, lattice_s, variances }
    }

    /// Isotropic profile for the BS and UE panels of `config`.
    pub fn for_config(config: &NetworkConfig) -> Self {
        Self::isotropic(
            wavenumber_lattice(config.bs_antennas_h, config.bs_antennas_v, config.bs_spacing, config.wavelength),
            wavenumber_lattice(config.ue_antennas_h, config.ue_antennas_v, config.ue_spacing, config.wavelength),
        )
    }
}

/// Steering bases for one layout, reused across many small-scale draws.
#[derive(Debug, Clone)]
pub struct SmallScaleSampler {
    std_devs: DMatrix<f64>,
    bs_steering: Vec<CMatrix>,
    ue_steering_t: Vec<CMatrix>,
    prefactor: f64,
}

impl SmallScaleSampler {
    pub fn new(profile: &SpectralProfile, layout: &NetworkLayout) -> Self {
        let bs_steering = layout
            .bs_positions
            .iter()
            .map(|p| steering_matrix(&profile.lattice_r, p, &layout.bs_offsets))
            .collect();
        let ue_steering_t = layout
            .ue_positions
            .iter()
            .map(|p| steering_matrix(&profile.lattice_s, p, &layout.ue_offsets).transpose())
            .collect();
        let nr = layout.bs_offsets.len() as f64;
        let ns = layout.ue_offsets.len() as f64;
        Self {
            // CN(0, s2): real and imaginary parts each N(0, s2 / 2)
            std_devs: profile.variances.map(|v| (v / 2.0).sqrt()),
            bs_steering,
            ue_steering_t,
            prefactor: (nr * ns).sqrt(),
        }
    }

    pub fn num_bs(&self) -> usize {
        self.bs_steering.len()
    }

    pub fn num_ue(&self) -> usize {
        self.ue_steering_t.len()
    }

    /// Draws one `H_mk` per BS/UE pair, ordered `m * K + k`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<CMatrix> {
        let (lr, ls) = self.std_devs.shape();
        let mut out = Vec::with_capacity(self.num_bs() * self.num_ue());
        for a_r in &self.bs_steering {
            for a_s_t in &self.ue_steering_t {
                let coeffs = CMatrix::from_fn(lr, ls, |i, j| {
                    let s = self.std_devs[(i, j)];
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    C64::new(s * re, s * im)
                });
                let mut h = cmul(&cmul(a_r, &coeffs), a_s_t);
                h *= C64::from(self.prefactor);
                out.push(h);
            }
        }
        out
    }
}

/// Draws one small-scale matrix per BS/UE pair (ordered `m * K + k`).
pub fn sample_small_scale<R: Rng + ?Sized>(
    profile: &SpectralProfile,
    layout: &NetworkLayout,
    rng: &mut R,
) -> Vec<CMatrix> {
    SmallScaleSampler::new(profile, layout).sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::place_network;
    use crate::seed;

    #[test]
    fn profile_sums_to_one() {
        let p = SpectralProfile::for_config(&NetworkConfig::paper_scale());
        assert!((p.variances.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scalar_channel_is_unit_variance() {
        let cfg = NetworkConfig::with_sizes(1, 1, (1, 1), (1, 1));
        let mut rng = seed::rng(11);
        let layout = place_network(&cfg, &mut rng).unwrap();
        let sampler = SmallScaleSampler::new(&SpectralProfile::for_config(&cfg), &layout);
        let n = 10_000;
        let mut power = 0.0;
        let mut mean = C64::new(0.0, 0.0);
        for _ in 0..n {
            let h = sampler.sample(&mut rng);
            assert_eq!(h[0].shape(), (1, 1));
            power += h[0][(0, 0)].norm_sqr();
            mean += h[0][(0, 0)];
        }
        let var = power / n as f64 - (mean / n as f64).norm_sqr();
        assert!((var - 1.0).abs() < 0.05, "sample variance {var}");
    }

    #[test]
    fn single_lattice_point_gives_rank_one() {
        // 1 x 1 panels on both sides have only the (0, 0) point; use a
        // 3-element BS panel at tiny spacing so its lattice is also a single point.
        let mut cfg = NetworkConfig::with_sizes(1, 1, (3, 1), (2, 1));
        cfg.bs_spacing = 0.1;
        cfg.ue_spacing = 0.1;
        let profile = SpectralProfile::for_config(&cfg);
        assert_eq!((profile.lattice_r.len(), profile.lattice_s.len()), (1, 1));
        let mut rng = seed::rng(2);
        let layout = place_network(&cfg, &mut rng).unwrap();
        let h = sample_small_scale(&profile, &layout, &mut rng).remove(0);
        let sv = h.clone().singular_values();
        assert!(sv[0] > 1e-6);
        assert!(sv[1] < 1e-10 * sv[0]);
    }

    #[test]
    fn steering_columns_are_orthonormal() {
        let cfg = NetworkConfig::paper_scale();
        let profile = SpectralProfile::for_config(&cfg);
        let layout = place_network(&cfg, &mut seed::rng(4)).unwrap();
        let a = crate::env::steering_matrix(&profile.lattice_r, &layout.bs_positions[3], &layout.bs_offsets);
        let gram = a.adjoint() * &a;
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((gram[(i, j)] - C64::from(expect)).norm() < 1e-10);
            }
        }
    }
}
