//! Globally continuous, piecewise parabolic bottom topography.
//!
//! The analytic bottom is sampled at every interface and cell center; each
//! cell's parabola interpolates its three samples. Neighbouring cells share
//! the interface sample, so continuity holds bit-exactly.

use crate::error::{Result, SweError};
use crate::grid::{BoundaryKind, Grid};

/// Parabolic bottom of a single cell in the local coordinate
/// `x ∈ [-dx/2, dx/2]`: `b(x) = b0 + b1 x + b2 x²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BottomCell {
    pub left: f64,
    pub center: f64,
    pub right: f64,
    pub dx: f64,
}

impl BottomCell {
    pub fn from_samples(left: f64, center: f64, right: f64, dx: f64) -> Self {
        BottomCell { left, center, right, dx }
    }

    /// Builds a cell from polynomial coefficients; the endpoint samples are
    /// computed once and stored.
    pub fn from_coefficients(b0: f64, b1: f64, b2: f64, dx: f64) -> Self {
        let h = 0.5 * dx;
        BottomCell {
            left: b0 - b1 * h + b2 * h * h,
            center: b0,
            right: b0 + b1 * h + b2 * h * h,
            dx,
        }
    }

    #[inline]
    pub fn coefficients(&self) -> (f64, f64, f64) {
        let dx = self.dx;
        (
            self.center,
            (self.right - self.left) / dx,
            2.0 * (self.right - 2.0 * self.center + self.left) / (dx * dx),
        )
    }

    /// Bottom value at a local coordinate. Endpoints return the stored
    /// interface samples exactly.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let h = 0.5 * self.dx;
        debug_assert!(x.abs() <= h * (1.0 + 1e-12), "x_local {x} outside cell of width {}", self.dx);
        if x == h {
            self.right
        } else if x == -h {
            self.left
        } else {
            let (b0, b1, b2) = self.coefficients();
            b0 + x * (b1 + x * b2)
        }
    }

    #[inline]
    pub fn deriv(&self, x: f64) -> f64 {
        let (_, b1, b2) = self.coefficients();
        b1 + 2.0 * b2 * x
    }

    /// Exact cell average of the parabola (Simpson's rule).
    #[inline]
    pub fn average(&self) -> f64 {
        (self.left + 4.0 * self.center + self.right) / 6.0
    }

    /// Maximum of the bottom over the closed cell.
    pub fn max_in_cell(&self) -> f64 {
        let (_, b1, b2) = self.coefficients();
        let mut m = self.left.max(self.right);
        if b2 < 0.0 {
            let xv = -b1 / (2.0 * b2);
            if xv.abs() < 0.5 * self.dx {
                m = m.max(self.eval(xv));
            }
        }
        m
    }
}

/// Projected bottom on the whole grid, including one ghost cell per side.
#[derive(Debug, Clone, PartialEq)]
pub struct BottomTopography {
    grid: Grid,
    /// Interface samples for `j = -1..=n+1`, stored at `j + 1`.
    iface: Vec<f64>,
    /// Center samples for `i = -1..=n`, stored at `i + 1`.
    centers: Vec<f64>,
}

impl BottomTopography {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Interface sample `b_{j-1/2}` style access by signed interface index.
    #[inline]
    pub fn interface_value(&self, j: isize) -> f64 {
        self.iface[(j + 1) as usize]
    }

    #[inline]
    pub fn center_value(&self, i: isize) -> f64 {
        self.centers[(i + 1) as usize]
    }

    /// Cell `i` for `i ∈ -1..=n_cells` (ghosts included).
    #[inline]
    pub fn cell(&self, i: isize) -> BottomCell {
        BottomCell::from_samples(
            self.interface_value(i),
            self.center_value(i),
            self.interface_value(i + 1),
            self.grid.dx,
        )
    }

    /// Bottom at a global position, using the grid's cell ownership rule.
    pub fn eval_global(&self, x: f64) -> f64 {
        let (k, local) = self.grid.locate(x);
        self.cell(k).eval(local)
    }

    pub fn deriv_global(&self, x: f64) -> f64 {
        let (k, local) = self.grid.locate(x);
        self.cell(k).deriv(local)
    }

    pub fn interface_values(&self) -> &[f64] {
        &self.iface[1..self.iface.len() - 1]
    }
}

/// Projects an analytic bottom onto the continuous piecewise parabolic space.
pub fn project_bottom(b: impl Fn(f64) -> f64, grid: &Grid) -> Result<BottomTopography> {
    let n = grid.n_cells as isize;
    let sample = |x: f64| -> Result<f64> {
        let v = b(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(SweError::InvalidInput(format!("bottom is not finite at x = {x}")))
        }
    };
    let mut iface = Vec::with_capacity(grid.n_cells + 3);
    for j in -1..=n + 1 {
        iface.push(sample(grid.interface(j))?);
    }
    let mut centers = Vec::with_capacity(grid.n_cells + 2);
    for i in -1..=n {
        centers.push(sample(grid.center(i))?);
    }
    if grid.boundary == BoundaryKind::Periodic {
        // ghosts and the closing interface mirror the opposite end
        let nu = grid.n_cells;
        iface[nu + 1] = iface[1];
        iface[0] = iface[nu];
        iface[nu + 2] = iface[2];
        centers[0] = centers[nu];
        centers[nu + 1] = centers[1];
    }
    Ok(BottomTopography { grid: *grid, iface, centers })
}
