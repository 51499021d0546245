use std::collections::HashMap;
use std::f64::consts::PI;

use crate::{CMatrix, C64};

/// The propagating plane-wave directions resolvable by a planar array:
/// the DFT wavenumber grid of the aperture intersected with the disk
/// `kx^2 + ky^2 <= (2 pi / lambda)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavenumberLattice {
    pub grid_h: usize,
    pub grid_v: usize,
    /// Integer indices `(lx, ly)`.
    pub points: Vec<(i32, i32)>,
    /// `[kx, ky, kz]` in rad/m for each point.
    pub wave_vectors: Vec<[f64; 3]>,
}

impl WavenumberLattice {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, point: (i32, i32)) -> bool {
        self.points.contains(&point)
    }
}

/// Enumerates the lattice for a `grid_h x grid_v` panel with element spacing
/// `spacing` (in wavelengths).
///
/// At exactly half-wavelength spacing an even grid puts `+N/2` and `-N/2` on
/// the same DFT column; both grazing points are dropped so the remaining
/// steering vectors stay orthogonal.
pub fn wavenumber_lattice(grid_h: usize, grid_v: usize, spacing: f64, wavelength: f64) -> WavenumberLattice {
    assert!(grid_h >= 1 && grid_v >= 1 && spacing > 0.0 && wavelength > 0.0);
    let aperture_h = grid_h as f64 * spacing;
    let aperture_v = grid_v as f64 * spacing;
    let tol = 1e-12;
    let lim_h = (aperture_h + tol).floor() as i32;
    let lim_v = (aperture_v + tol).floor() as i32;

    let mut candidates = Vec::new();
    for ly in -lim_v..=lim_v {
        for lx in -lim_h..=lim_h {
            let u = lx as f64 / aperture_h;
            let v = ly as f64 / aperture_v;
            if u * u + v * v <= 1.0 + tol {
                candidates.push((lx, ly));
            }
        }
    }

    let mut columns: HashMap<(i32, i32), usize> = HashMap::new();
    for &(lx, ly) in &candidates {
        *columns.entry((lx.rem_euclid(grid_h as i32), ly.rem_euclid(grid_v as i32))).or_default() += 1;
    }
    let points: Vec<(i32, i32)> = candidates
        .into_iter()
        .filter(|&(lx, ly)| columns[&(lx.rem_euclid(grid_h as i32), ly.rem_euclid(grid_v as i32))] == 1)
        .collect();

    let k0 = 2.0 * PI / wavelength;
    let wave_vectors = points
        .iter()
        .map(|&(lx, ly)| {
            let kx = 2.0 * PI * lx as f64 / (aperture_h * wavelength);
            let ky = 2.0 * PI * ly as f64 / (aperture_v * wavelength);
            [kx, ky, (k0 * k0 - kx * kx - ky * ky).max(0.0).sqrt()]
        })
        .collect();

    WavenumberLattice { grid_h, grid_v, points, wave_vectors }
}

/// Unit-norm steering vectors of the lattice for a panel at `origin` with
/// element `offsets`, one column per lattice point.
pub fn steering_matrix(lattice: &WavenumberLattice, origin: &[f64; 3], offsets: &[[f64; 3]]) -> CMatrix {
    let n = offsets.len();
    let scale = 1.0 / (n as f64).sqrt();
    let mut out = CMatrix::zeros(n, lattice.len());
    for (col, k) in lattice.wave_vectors.iter().enumerate() {
        // common phase of the panel position, reduced once per column
        let common = (k[0] * origin[0] + k[1] * origin[1] + k[2] * origin[2]).rem_euclid(2.0 * PI);
        let common = C64::from_polar(scale, common);
        for (row, off) in offsets.iter().enumerate() {
            let phase = k[0] * off[0] + k[1] * off[1] + k[2] * off[2];
            out[(row, col)] = common * C64::from_polar(1.0, phase);
        }
    }
    out
}
