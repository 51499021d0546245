use super::ReceiverError;

/// Per-antenna transmit power `p_k` of every user, in watts. A user's total
/// power is `N_s * p_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    per_antenna: Vec<f64>,
}

impl PowerAllocation {
    /// Validates `N_s * p_k <= p_max` for every user.
    pub fn new(per_antenna: Vec<f64>, ue_antennas: usize, p_max: f64) -> Result<Self, ReceiverError> {
        for (ue, &p) in per_antenna.iter().enumerate() {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(ReceiverError::InvalidPower { ue, value: p });
            }
            let total = ue_antennas as f64 * p;
            if total > p_max {
                return Err(ReceiverError::PowerCap { ue, total, p_max });
            }
        }
        Ok(Self { per_antenna })
    }

    /// Same per-antenna power for every user, without a cap check.
    pub fn uniform(num_ue: usize, per_antenna: f64) -> Self {
        Self { per_antenna: vec![per_antenna; num_ue] }
    }

    /// Largest per-antenna power that respects the cap: `p_max / N_s`,
    /// rounded down until `N_s * p <= p_max` holds in floating point.
    pub fn max_per_antenna(ue_antennas: usize, p_max: f64) -> f64 {
        capped(p_max / ue_antennas as f64, ue_antennas, p_max)
    }

    pub fn per_antenna(&self) -> &[f64] {
        &self.per_antenna
    }

    pub fn get(&self, ue: usize) -> f64 {
        self.per_antenna[ue]
    }

    pub fn num_ue(&self) -> usize {
        self.per_antenna.len()
    }

    /// `N_s * p_k` for each user.
    pub fn user_totals(&self, ue_antennas: usize) -> Vec<f64> {
        self.per_antenna.iter().map(|p| ue_antennas as f64 * p).collect()
    }

    /// `sum_k N_s * p_k`.
    pub fn total(&self, ue_antennas: usize) -> f64 {
        self.user_totals(ue_antennas).iter().sum()
    }
}

/// Steps `p` down until `n * p <= p_max` holds exactly.
pub(crate) fn capped(mut p: f64, n: usize, p_max: f64) -> f64 {
    while n as f64 * p > p_max {
        p = p.next_down();
    }
    p
}
