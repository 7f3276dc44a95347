//! Uniform sampling lattices, symmetric about the origin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const INTEGRALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Dim {
    One,
    Two,
}

impl TryFrom<u8> for Dim {
    type Error = Error;

    fn try_from(rank: u8) -> Result<Self> {
        Dim::from_rank(rank as usize)
    }
}

impl From<Dim> for u8 {
    fn from(d: Dim) -> u8 {
        match d {
            Dim::One => 1,
            Dim::Two => 2,
        }
    }
}

impl Dim {
    pub fn from_rank(rank: usize) -> Result<Self> {
        match rank {
            1 => Ok(Dim::One),
            2 => Ok(Dim::Two),
            other => Err(Error::InvalidGrid(format!(
                "dimension must be 1 or 2, got {other}"
            ))),
        }
    }
}

/// A 1D line or 2D square lattice with `x_i = -half_extent + i * spacing`
/// along each axis. The same spacing is used on both axes in 2D.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridSpec", into = "GridSpec")]
pub struct SpectralGrid {
    dim: Dim,
    spacing: f64,
    half_extent: f64,
    points_per_axis: usize,
}

/// Serialized form of a grid; `points_per_axis` is always re-derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub dim: Dim,
    pub spacing: f64,
    pub half_extent: f64,
}

impl TryFrom<GridSpec> for SpectralGrid {
    type Error = Error;

    fn try_from(g: GridSpec) -> Result<Self> {
        SpectralGrid::new(g.dim, g.spacing, g.half_extent)
    }
}

impl From<SpectralGrid> for GridSpec {
    fn from(g: SpectralGrid) -> Self {
        GridSpec {
            dim: g.dim,
            spacing: g.spacing,
            half_extent: g.half_extent,
        }
    }
}

impl SpectralGrid {
    pub fn new(dim: Dim, spacing: f64, half_extent: f64) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "spacing must be positive, got {spacing}"
            )));
        }
        if !(half_extent.is_finite() && half_extent > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half extent must be positive, got {half_extent}"
            )));
        }
        let steps = half_extent / spacing;
        let rounded = steps.round();
        if (steps - rounded).abs() > INTEGRALITY_TOL * steps.max(1.0) || rounded < 1.0 {
            return Err(Error::InvalidGrid(format!(
                "half extent {half_extent} is not an integral multiple of spacing {spacing}"
            )));
        }
        Ok(Self {
            dim,
            spacing,
            half_extent,
            points_per_axis: 2 * rounded as usize + 1,
        })
    }

    /// `[-20, 20]` at spacing 0.01, 4001 points.
    pub fn default_1d() -> Self {
        Self::new(Dim::One, 0.01, 20.0).expect("default 1D grid is valid")
    }

    /// `[-5, 5]²` at spacing 0.1, 101 × 101 points.
    pub fn default_2d() -> Self {
        Self::new(Dim::Two, 0.1, 5.0).expect("default 2D grid is valid")
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Total number of lattice points (`n` in 1D, `n²` in 2D).
    pub fn len(&self) -> usize {
        match self.dim {
            Dim::One => self.points_per_axis,
            Dim::Two => self.points_per_axis * self.points_per_axis,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the origin along one axis.
    pub fn center_index(&self) -> usize {
        self.points_per_axis / 2
    }

    /// Row-major flat index of the origin.
    pub fn center_flat_index(&self) -> usize {
        match self.dim {
            Dim::One => self.center_index(),
            Dim::Two => self.center_index() * self.points_per_axis + self.center_index(),
        }
    }

    /// Coordinate of axis index `i`. Computed from the signed offset to the
    /// centre so that the origin is exactly zero and the lattice is exactly
    /// symmetric.
    pub fn coord(&self, i: usize) -> f64 {
        let offset = i as i64 - self.center_index() as i64;
        offset as f64 * self.spacing
    }

    pub fn axis(&self) -> Vec<f64> {
        (0..self.points_per_axis).map(|i| self.coord(i)).collect()
    }

    /// Axis index nearest to coordinate `x`, clamped to the lattice.
    pub fn nearest_index(&self, x: f64) -> usize {
        let offset = (x / self.spacing).round();
        let idx = self.center_index() as f64 + offset;
        idx.clamp(0.0, (self.points_per_axis - 1) as f64) as usize
    }

    /// Same lattice with the other dimensionality.
    pub fn with_dim(&self, dim: Dim) -> Self {
        Self { dim, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grids() {
        let g = SpectralGrid::default_1d();
        assert_eq!(g.len(), 4001);
        assert_eq!(g.coord(2000), 0.0);
        assert_eq!(g.center_index(), 2000);
        assert_eq!(g.coord(0), -20.0);
        assert_eq!(g.coord(4000), 20.0);

        let g2 = SpectralGrid::default_2d();
        assert_eq!(g2.points_per_axis(), 101);
        assert_eq!(g2.len(), 101 * 101);
        assert_eq!(g2.center_flat_index(), 50 * 101 + 50);
    }

    #[test]
    fn smallest_grid() {
        let g = SpectralGrid::new(Dim::One, 1.0, 1.0).unwrap();
        assert_eq!(g.axis(), vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn symmetric_coordinates() {
        let g = SpectralGrid::default_1d();
        for i in 0..g.len() {
            assert_eq!(g.coord(i), -g.coord(g.len() - 1 - i));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SpectralGrid::new(Dim::One, 0.0, 1.0).is_err());
        assert!(SpectralGrid::new(Dim::One, -0.1, 1.0).is_err());
        assert!(SpectralGrid::new(Dim::One, 0.1, 0.0).is_err());
        assert!(SpectralGrid::new(Dim::One, 0.3, 1.0).is_err());
        assert!(SpectralGrid::new(Dim::One, 2.0, 1.0).is_err());
        assert!(Dim::from_rank(3).is_err());
    }

    #[test]
    fn nearest_index_clamps() {
        let g = SpectralGrid::default_1d();
        assert_eq!(g.nearest_index(0.0), 2000);
        assert_eq!(g.nearest_index(0.014), 2001);
        assert_eq!(g.nearest_index(-100.0), 0);
        assert_eq!(g.nearest_index(100.0), 4000);
    }
}
