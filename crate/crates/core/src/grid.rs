use crate::error::{Result, SweError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    Periodic,
    /// Ghost cells and boundary point values stay at their initial values.
    DirichletFrozen,
    /// Zeroth-order extrapolation of the boundary point value into the ghosts.
    OutflowExtrapolate,
}

impl BoundaryKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(BoundaryKind::Periodic),
            "dirichlet" | "dirichlet-frozen" => Ok(BoundaryKind::DirichletFrozen),
            "outflow" | "outflow-extrapolate" => Ok(BoundaryKind::OutflowExtrapolate),
            other => Err(SweError::InvalidInput(format!(
                "unknown boundary kind '{other}' (expected periodic, dirichlet, outflow)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::Periodic => "periodic",
            BoundaryKind::DirichletFrozen => "dirichlet",
            BoundaryKind::OutflowExtrapolate => "outflow",
        }
    }
}

/// Equidistant 1D grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub dx: f64,
    pub boundary: BoundaryKind,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize, boundary: BoundaryKind) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(SweError::InvalidInput(format!(
                "domain [{x_min}, {x_max}] is empty or not finite"
            )));
        }
        if n_cells == 0 {
            return Err(SweError::InvalidInput("grid needs at least one cell".into()));
        }
        Ok(Grid {
            x_min,
            x_max,
            n_cells,
            dx: (x_max - x_min) / n_cells as f64,
            boundary,
        })
    }

    /// Position of interface `j` (`j = 0..=n_cells`); ghost interfaces are
    /// reachable with signed indices.
    #[inline]
    pub fn interface(&self, j: isize) -> f64 {
        self.x_min + j as f64 * self.dx
    }

    #[inline]
    pub fn center(&self, i: isize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn n_points(&self) -> usize {
        self.n_cells + 1
    }

    /// Owning cell of a global position and the local coordinate in
    /// `[-dx/2, dx/2]`. A position exactly on an interface belongs to the cell
    /// on its right. Periodic grids wrap; other grids clamp to one ghost cell
    /// on each side, i.e. the returned index lies in `-1..=n_cells`.
    pub fn locate(&self, x: f64) -> (isize, f64) {
        let n = self.n_cells as isize;
        let k = ((x - self.x_min) / self.dx).floor() as isize;
        let half = 0.5 * self.dx;
        match self.boundary {
            BoundaryKind::Periodic => {
                let local = (x - self.center(k)).clamp(-half, half);
                (k.rem_euclid(n), local)
            }
            _ => {
                if k < -1 {
                    (-1, -half)
                } else if k > n {
                    (n, half)
                } else {
                    (k, (x - self.center(k)).clamp(-half, half))
                }
            }
        }
    }
}
