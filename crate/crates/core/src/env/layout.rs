use rand::Rng;

use super::{EnvError, NetworkConfig};

/// Positions of every base station and user plus the per-antenna offsets
/// of their planar arrays. Coordinates are meters; base stations sit at
/// height `bs_ue_height_gap`, users at height 0.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkLayout {
    pub bs_positions: Vec<[f64; 3]>,
    pub ue_positions: Vec<[f64; 3]>,
    /// Element offsets of a BS panel, indexed row by row.
    pub bs_offsets: Vec<[f64; 3]>,
    /// Element offsets of a UE panel, indexed row by row.
    pub ue_offsets: Vec<[f64; 3]>,
}

/// Rows and columns of the BS grid: the most square factorization of `M`.
pub(crate) fn bs_grid_shape(num_bs: usize) -> (usize, usize) {
    let mut rows = (num_bs as f64).sqrt().floor() as usize;
    while rows > 1 && num_bs % rows != 0 {
        rows -= 1;
    }
    let rows = rows.max(1);
    (rows, num_bs / rows)
}

fn panel_offsets(grid_h: usize, grid_v: usize, spacing_m: f64) -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity(grid_h * grid_v);
    for v in 0..grid_v {
        for h in 0..grid_h {
            out.push([h as f64 * spacing_m, v as f64 * spacing_m, 0.0]);
        }
    }
    out
}

/// Places base stations at the centers of an equal-area grid over the square
/// and draws users uniformly at random on it.
pub fn place_network<R: Rng + ?Sized>(config: &NetworkConfig, rng: &mut R) -> Result<NetworkLayout, EnvError> {
    config.validate()?;
    let (rows, cols) = bs_grid_shape(config.num_bs);
    let side = config.area_side;
    let mut bs_positions = Vec::with_capacity(config.num_bs);
    for r in 0..rows {
        for c in 0..cols {
            bs_positions.push([
                (c as f64 + 0.5) * side / cols as f64,
                (r as f64 + 0.5) * side / rows as f64,
                config.bs_ue_height_gap,
            ]);
        }
    }
    let mut layout = NetworkLayout {
        bs_positions,
        ue_positions: Vec::new(),
        bs_offsets: panel_offsets(config.bs_antennas_h, config.bs_antennas_v, config.bs_spacing * config.wavelength),
        ue_offsets: panel_offsets(config.ue_antennas_h, config.ue_antennas_v, config.ue_spacing * config.wavelength),
    };
    layout.redraw_users(config, rng);
    Ok(layout)
}

impl NetworkLayout {
    /// Draws fresh uniform user positions, keeping the base stations.
    pub fn redraw_users<R: Rng + ?Sized>(&mut self, config: &NetworkConfig, rng: &mut R) {
        let side = config.area_side;
        self.ue_positions = (0..config.num_ue)
            .map(|_| [rng.random::<f64>() * side, rng.random::<f64>() * side, 0.0])
            .collect();
    }

    pub fn num_bs(&self) -> usize {
        self.bs_positions.len()
    }

    pub fn num_ue(&self) -> usize {
        self.ue_positions.len()
    }

    pub(crate) fn check(&self, config: &NetworkConfig) -> Result<(), EnvError> {
        if self.num_bs() != config.num_bs
            || self.num_ue() != config.num_ue
            || self.bs_offsets.len() != config.bs_antennas()
            || self.ue_offsets.len() != config.ue_antennas()
        {
            return Err(EnvError::LayoutMismatch(format!(
                "layout has {} BSs x {} elements and {} UEs x {} elements",
                self.num_bs(),
                self.bs_offsets.len(),
                self.num_ue(),
                self.ue_offsets.len()
            )));
        }
        Ok(())
    }
}
