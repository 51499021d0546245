use serde::{Deserialize, Serialize};

use super::{dbm_to_watts, EnvError, SPEED_OF_LIGHT};

/// Physical and geometric parameters of the network.
///
/// Spacings are in wavelengths, every length in meters, powers in watts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    /// Number of base stations `M`.
    pub num_bs: usize,
    /// Number of users `K`.
    pub num_ue: usize,
    pub bs_antennas_h: usize,
    pub bs_antennas_v: usize,
    pub ue_antennas_h: usize,
    pub ue_antennas_v: usize,
    pub bs_spacing: f64,
    pub ue_spacing: f64,
    pub wavelength: f64,
    pub area_side: f64,
    pub bs_ue_height_gap: f64,
    pub noise_power: f64,
    /// Per-user total transmit power cap.
    pub p_max: f64,
}

impl NetworkConfig {
    pub const DEFAULT_P_MAX: f64 = 0.2;
    pub const DEFAULT_NOISE_DBM: f64 = -94.0;
    pub const DEFAULT_CARRIER_HZ: f64 = 3.5e9;

    /// Builds a config with the default physical constants (1 km square,
    /// 10 m height gap, lambda/3 spacing, 3.5 GHz, -94 dBm noise, 0.2 W cap).
    pub fn with_sizes(num_bs: usize, num_ue: usize, bs_grid: (usize, usize), ue_grid: (usize, usize)) -> Self {
        Self {
            num_bs,
            num_ue,
            bs_antennas_h: bs_grid.0,
            bs_antennas_v: bs_grid.1,
            ue_antennas_h: ue_grid.0,
            ue_antennas_v: ue_grid.1,
            bs_spacing: 1.0 / 3.0,
            ue_spacing: 1.0 / 3.0,
            wavelength: SPEED_OF_LIGHT / Self::DEFAULT_CARRIER_HZ,
            area_side: 1000.0,
            bs_ue_height_gap: 10.0,
            noise_power: dbm_to_watts(Self::DEFAULT_NOISE_DBM),
            p_max: Self::DEFAULT_P_MAX,
        }
    }

    /// The published evaluation setup: 9 BSs with 9x9 panels, 6 users with 3x3 panels.
    pub fn paper_scale() -> Self {
        Self::with_sizes(9, 6, (9, 9), (3, 3))
    }

    /// Desk-scale setup: 4 BSs with 4x4 panels, 3 users with 2x2 panels.
    pub fn desk_scale() -> Self {
        Self::with_sizes(4, 3, (4, 4), (2, 2))
    }

    /// Tiny setup used for learning-vs-oracle checks: 2 BSs with 2x2 panels,
    /// 2 single-antenna users.
    pub fn tiny() -> Self {
        Self::with_sizes(2, 2, (2, 2), (1, 1))
    }

    /// `N_r`.
    pub fn bs_antennas(&self) -> usize {
        self.bs_antennas_h * self.bs_antennas_v
    }

    /// `N_s`.
    pub fn ue_antennas(&self) -> usize {
        self.ue_antennas_h * self.ue_antennas_v
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let bad = |field, reason: &str| Err(EnvError::InvalidConfig { field, reason: reason.to_string() });
        let counts = [
            ("num_bs", self.num_bs),
            ("num_ue", self.num_ue),
            ("bs_antennas_h", self.bs_antennas_h),
            ("bs_antennas_v", self.bs_antennas_v),
            ("ue_antennas_h", self.ue_antennas_h),
            ("ue_antennas_v", self.ue_antennas_v),
        ];
        for (field, n) in counts {
            if n == 0 {
                return bad(field, "must be at least 1");
            }
        }
        for (field, d) in [("bs_spacing", self.bs_spacing), ("ue_spacing", self.ue_spacing)] {
            if !(d > 0.0 && d <= 0.5) {
                return bad(field, "must lie in (0, 0.5] wavelengths");
            }
        }
        let positive = [
            ("wavelength", self.wavelength),
            ("area_side", self.area_side),
            ("noise_power", self.noise_power),
            ("p_max", self.p_max),
        ];
        for (field, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return bad(field, "must be positive and finite");
            }
        }
        if !(self.bs_ue_height_gap > 0.0 && self.bs_ue_height_gap.is_finite()) {
            return bad("bs_ue_height_gap", "must be positive and finite");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        for c in [NetworkConfig::paper_scale(), NetworkConfig::desk_scale(), NetworkConfig::tiny()] {
            c.validate().unwrap();
        }
        let p = NetworkConfig::paper_scale();
        assert_eq!((p.bs_antennas(), p.ue_antennas()), (81, 9));
    }

    #[test]
    fn spacing_above_half_wavelength_is_rejected() {
        let mut c = NetworkConfig::desk_scale();
        c.bs_spacing = 0.6;
        assert!(matches!(c.validate(), Err(EnvError::InvalidConfig { field: "bs_spacing", .. })));
        c.bs_spacing = 0.5;
        c.validate().unwrap();
    }

    #[test]
    fn zero_counts_are_rejected() {
        let mut c = NetworkConfig::desk_scale();
        c.num_ue = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn noise_default_is_minus_94_dbm() {
        let c = NetworkConfig::desk_scale();
        assert!((10.0 * (c.noise_power * 1e3).log10() + 94.0).abs() < 1e-9);
    }
}
