//! Ground-cost matrices for 1-D lattices and square pixel grids.

use ndarray::Array2;

/// Distance metric between pixel coordinates of a 2-D grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    L1,
    L2,
}

/// How a cost matrix was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    /// `C[i][j] = |i - j|` on integer lattice positions.
    Lattice1d,
    /// `C[i][j] = (i - j)^2`. Not a metric (the triangle inequality fails);
    /// the quadratic growth penalizes long moves and makes mass collapse onto
    /// the nearest peak rather than drift across the lattice.
    Lattice1dSquared,
    /// Pixel distances on an `m x m` grid, flattened row-major.
    Grid2d { m: usize, metric: Metric },
}

/// Symmetric nonnegative ground costs with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    entries: Array2<f64>,
    geometry: Geometry,
}

impl CostMatrix {
    /// `C[i][j] = |i - j|` for `n` lattice positions.
    pub fn lattice_1d(n: usize) -> Self {
        assert!(n >= 1, "lattice needs at least one site");
        let entries = Array2::from_shape_fn((n, n), |(i, j)| (i as f64 - j as f64).abs());
        Self {
            entries,
            geometry: Geometry::Lattice1d,
        }
    }

    /// `C[i][j] = (i - j)^2` for `n` lattice positions.
    pub fn lattice_1d_squared(n: usize) -> Self {
        assert!(n >= 1, "lattice needs at least one site");
        let entries = Array2::from_shape_fn((n, n), |(i, j)| {
            let d = i as f64 - j as f64;
            d * d
        });
        Self {
            entries,
            geometry: Geometry::Lattice1dSquared,
        }
    }

    /// Pixel-to-pixel distances on an `m x m` grid under the chosen metric.
    ///
    /// Pixel `(r, c)` maps to index `r * m + c`, matching the row-major
    /// flattening used everywhere an image becomes a probability vector.
    pub fn grid_2d(m: usize, metric: Metric) -> Self {
        assert!(m >= 1, "grid needs at least one pixel");
        let n = m * m;
        let entries = Array2::from_shape_fn((n, n), |(i, j)| {
            let (r1, c1) = ((i / m) as f64, (i % m) as f64);
            let (r2, c2) = ((j / m) as f64, (j % m) as f64);
            let (dr, dc) = ((r1 - r2).abs(), (c1 - c2).abs());
            match metric {
                Metric::L1 => dr + dc,
                Metric::L2 => (dr * dr + dc * dc).sqrt(),
            }
        });
        Self {
            entries,
            geometry: Geometry::Grid2d { m, metric },
        }
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().cloned().fold(0.0, f64::max)
    }
}
