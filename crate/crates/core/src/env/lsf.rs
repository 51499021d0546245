use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{from_db, EnvError, NetworkConfig, NetworkLayout};

/// Shadow-fading standard deviation in dB.
pub const SHADOWING_STD_DB: f64 = 4.0;

/// Linear-scale large-scale fading coefficients, `M x K`.
#[derive(Debug, Clone, PartialEq)]
pub struct LsfMatrix {
    pub beta: DMatrix<f64>,
}

impl LsfMatrix {
    pub fn num_bs(&self) -> usize {
        self.beta.nrows()
    }

    pub fn num_ue(&self) -> usize {
        self.beta.ncols()
    }

    pub fn beta_db(&self, bs: usize, ue: usize) -> f64 {
        10.0 * self.beta[(bs, ue)].log10()
    }
}

/// Pathloss in dB at distance `d` meters, without shadowing.
pub fn pathloss_db(d: f64) -> f64 {
    -30.5 - 36.7 * d.log10()
}

/// 3-D distance between a BS and a UE, minimized over the nine wrap-around
/// images of the UE. UE coordinates are first folded back into the square.
pub fn wrapped_distance(bs: &[f64; 3], ue: &[f64; 3], area_side: f64, height_gap: f64) -> f64 {
    let ux = ue[0].rem_euclid(area_side);
    let uy = ue[1].rem_euclid(area_side);
    let mut best = f64::INFINITY;
    for sx in [-1.0, 0.0, 1.0] {
        for sy in [-1.0, 0.0, 1.0] {
            let dx = ux + sx * area_side - bs[0];
            let dy = uy + sy * area_side - bs[1];
            best = best.min(dx * dx + dy * dy);
        }
    }
    (best + height_gap * height_gap).sqrt()
}

/// Draws `beta_mk` for every BS/UE pair: pathloss at the wrap-around distance
/// plus log-normal shadowing.
pub fn large_scale_fading<R: Rng + ?Sized>(
    layout: &NetworkLayout,
    config: &NetworkConfig,
    rng: &mut R,
) -> Result<LsfMatrix, EnvError> {
    layout.check(config)?;
    let shadow = Normal::new(0.0, SHADOWING_STD_DB).expect("positive std");
    let mut beta = DMatrix::zeros(config.num_bs, config.num_ue);
    for k in 0..config.num_ue {
        for m in 0..config.num_bs {
            let d = wrapped_distance(&layout.bs_positions[m], &layout.ue_positions[k], config.area_side, config.bs_ue_height_gap);
            beta[(m, k)] = from_db(pathloss_db(d) + shadow.sample(rng));
        }
    }
    Ok(LsfMatrix { beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::place_network;
    use crate::seed;

    #[test]
    fn pathloss_reference_points() {
        assert!((pathloss_db(1.0) + 30.5).abs() < 1e-12);
        assert!((pathloss_db(100.0) + 103.9).abs() < 1e-12);
    }

    #[test]
    fn wrap_around_beats_in_square_distance() {
        let bs = [950.0, 950.0, 10.0];
        let ue = [0.0, 0.0, 0.0];
        let wrapped = wrapped_distance(&bs, &ue, 1000.0, 10.0);
        let direct = (950.0f64.powi(2) * 2.0 + 100.0).sqrt();
        // brute-force min over the nine shifted images
        let mut brute = f64::INFINITY;
        for sx in -1..=1 {
            for sy in -1..=1 {
                let x = ue[0] + 1000.0 * sx as f64;
                let y = ue[1] + 1000.0 * sy as f64;
                brute = brute.min(((x - bs[0]).powi(2) + (y - bs[1]).powi(2) + 100.0).sqrt());
            }
        }
        assert!(wrapped < direct);
        assert!((wrapped - brute).abs() < 1e-12);
        assert!((wrapped - (50.0f64.powi(2) * 2.0 + 100.0).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn translating_users_by_the_period_keeps_distances() {
        let cfg = NetworkConfig::paper_scale();
        let layout = place_network(&cfg, &mut seed::rng(3)).unwrap();
        for bs in &layout.bs_positions {
            for ue in &layout.ue_positions {
                let a = wrapped_distance(bs, ue, 1000.0, 10.0);
                for shift in [[1000.0, 0.0], [0.0, -1000.0], [3000.0, 2000.0]] {
                    let moved = [ue[0] + shift[0], ue[1] + shift[1], ue[2]];
                    assert!((a - wrapped_distance(bs, &moved, 1000.0, 10.0)).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn lsf_is_positive_and_finite() {
        let cfg = NetworkConfig::paper_scale();
        let mut rng = seed::rng(5);
        let layout = place_network(&cfg, &mut rng).unwrap();
        let lsf = large_scale_fading(&layout, &cfg, &mut rng).unwrap();
        assert_eq!((lsf.num_bs(), lsf.num_ue()), (9, 6));
        assert!(lsf.beta.iter().all(|b| *b > 0.0 && b.is_finite()));
    }
}
