use crate::error::{Result, SweError};

/// Water height and depth-integrated momentum, at a point or as a cell average.
///
/// Invariants: `h >= 0`, and `h == 0` implies `m == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservedPair {
    h: f64,
    m: f64,
}

impl ConservedPair {
    pub const DRY: ConservedPair = ConservedPair { h: 0.0, m: 0.0 };

    /// Checked constructor. Heights in `[-DRY_AVG_TOL, 0]` are snapped to a dry
    /// state; anything more negative is an error.
    pub fn new(h: f64, m: f64) -> Result<Self> {
        if !h.is_finite() || !m.is_finite() {
            return Err(SweError::InvalidInput(format!("non-finite state ({h}, {m})")));
        }
        if h < -DRY_AVG_TOL {
            return Err(SweError::NegativeHeight {
                h,
                location: "ConservedPair::new".into(),
            });
        }
        Ok(Self::clamped(h, m))
    }

    /// Regularizing constructor: any `h <= 0` becomes the dry state.
    #[inline]
    pub fn clamped(h: f64, m: f64) -> Self {
        if h > 0.0 {
            ConservedPair { h, m }
        } else {
            ConservedPair::DRY
        }
    }

    #[inline]
    pub fn h(&self) -> f64 {
        self.h
    }

    #[inline]
    pub fn m(&self) -> f64 {
        self.m
    }

    #[inline]
    pub fn is_dry(&self) -> bool {
        self.h == 0.0
    }

    /// Velocity `m / h`, zero for dry states.
    #[inline]
    pub fn velocity(&self) -> f64 {
        if self.h > 0.0 {
            self.m / self.h
        } else {
            0.0
        }
    }

    /// Froude number `|v| / sqrt(g h)`, zero for dry states.
    pub fn froude(&self, g: f64) -> f64 {
        if self.h > 0.0 {
            self.velocity().abs() / (g * self.h).sqrt()
        } else {
            0.0
        }
    }
}

/// Average heights at or below this are treated as machine zero.
pub const DRY_AVG_TOL: f64 = 1e-14;

/// Physical and numerical constants of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub g: f64,
    /// Point values whose update would fall below this height are frozen.
    pub eps_freeze: f64,
    pub dry_avg_tol: f64,
    /// Bound on the power-law exponent of the limited reconstruction.
    pub e_max: f64,
    /// Well-balancing of point values is only applied below this Froude number.
    pub froude_wb_threshold: f64,
    pub cfl: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            g: 9.812,
            eps_freeze: 1e-7,
            dry_avg_tol: DRY_AVG_TOL,
            e_max: 50.0,
            froude_wb_threshold: 1.0,
            cfl: 0.7,
        }
    }
}

impl Constants {
    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }

    pub fn with_g(mut self, g: f64) -> Self {
        self.g = g;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("g", self.g),
            ("eps_freeze", self.eps_freeze),
            ("dry_avg_tol", self.dry_avg_tol),
            ("e_max", self.e_max),
            ("froude_wb_threshold", self.froude_wb_threshold),
            ("cfl", self.cfl),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(SweError::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if self.e_max <= 1.0 {
            return Err(SweError::InvalidInput("e_max must exceed 1".into()));
        }
        Ok(())
    }
}

/// Characteristic description of a point: values `Q±`, speeds `λ±` and
/// source terms `S±`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CharState {
    pub q_plus: f64,
    pub q_minus: f64,
    pub speed_plus: f64,
    pub speed_minus: f64,
    pub source_plus: f64,
    pub source_minus: f64,
}

/// All degrees of freedom of an Active Flux discretization.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionState {
    /// Cell averages, one per cell.
    pub avg: Vec<ConservedPair>,
    /// Interface point values, `n_cells + 1` of them. For periodic grids the
    /// first and last entries coincide.
    pub pts: Vec<ConservedPair>,
    /// Points currently frozen, with the last accepted value.
    pub frozen: Vec<Option<ConservedPair>>,
    pub t: f64,
}

impl SolutionState {
    pub fn n_cells(&self) -> usize {
        self.avg.len()
    }

    pub fn total_mass(&self, dx: f64) -> f64 {
        self.avg.iter().map(|q| q.h()).sum::<f64>() * dx
    }

    pub fn n_frozen(&self) -> usize {
        self.frozen.iter().filter(|f| f.is_some()).count()
    }
}
