//! Conservative update of the cell averages.

use std::collections::VecDeque;

use crate::bottom::BottomCell;
use crate::characteristics::physical_flux;
use crate::error::{Result, SweError};
use crate::reconstruction::{quadrature_center, CellReconstruction};
use crate::state::{ConservedPair, DRY_AVG_TOL};

/// Time-averaged numerical flux through one interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceFlux {
    pub fh: f64,
    pub fm: f64,
    /// Product of all draining reductions applied so far.
    pub drain_scale: f64,
}

impl InterfaceFlux {
    pub const ZERO: InterfaceFlux = InterfaceFlux { fh: 0.0, fm: 0.0, drain_scale: 1.0 };

    fn scale(&mut self, factor: f64) {
        self.fh *= factor;
        self.fm *= factor;
        self.drain_scale *= factor;
    }
}

/// Simpson's rule in time of the physical flux.
pub fn simpson_flux(q_n: ConservedPair, q_half: ConservedPair, q_full: ConservedPair, g: f64) -> InterfaceFlux {
    let a = physical_flux(q_n, g);
    let b = physical_flux(q_half, g);
    let c = physical_flux(q_full, g);
    InterfaceFlux {
        fh: (a.0 + 4.0 * b.0 + c.0) / 6.0,
        fm: (a.1 + 4.0 * b.1 + c.1) / 6.0,
        drain_scale: 1.0,
    }
}

/// Discrete bottom slopes entering the source quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceBetas {
    pub b1_right: f64,
    pub b1_left: f64,
    pub b2_right: f64,
    pub b2_left: f64,
    pub b0: f64,
}

impl SourceBetas {
    pub fn new(b: &BottomCell) -> Self {
        let (l, c, r, dx) = (b.left, b.center, b.right, b.dx);
        SourceBetas {
            b1_right: (-4.0 * c - l + 5.0 * r) / (3.0 * dx),
            b1_left: (4.0 * c - 5.0 * l + r) / (3.0 * dx),
            b2_right: (4.0 * c - 11.0 * l + 7.0 * r) / (9.0 * dx),
            b2_left: (-4.0 * c - 7.0 * l + 11.0 * r) / (9.0 * dx),
            b0: (r - l) / dx,
        }
    }
}

/// Heights entering the source quadrature of one cell. Index 0 is the left
/// interface, index 1 the right one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceQuadratureInputs {
    pub h_n: [f64; 2],
    pub h_half: [f64; 2],
    pub h_full: [f64; 2],
    /// Reconstructed height at the quadrature center.
    pub h_center: f64,
    pub bottom: BottomCell,
}

impl SourceQuadratureInputs {
    /// The same inputs with all interface heights held at their `t^n` values.
    pub fn stationary(&self) -> Self {
        SourceQuadratureInputs { h_half: self.h_n, h_full: self.h_n, ..*self }
    }
}

/// Momentum source rate `-g <h ∂x b>` of a cell, exact for the lake at rest
/// in fully wet cells.
pub fn source_quadrature(inp: &SourceQuadratureInputs, g: f64) -> f64 {
    let beta = SourceBetas::new(&inp.bottom);
    let [hl_n, hr_n] = inp.h_n;
    let [hl_half, hr_half] = inp.h_half;
    let [hl_full, hr_full] = inp.h_full;
    let sum = (hr_full / 12.0 + hr_half / 3.0) * beta.b1_right
        + (hl_full / 12.0 + hl_half / 3.0) * beta.b1_left
        - 0.25 * hr_n * beta.b2_right
        - 0.25 * hl_n * beta.b2_left
        + 2.0 / 3.0 * inp.h_center * beta.b0;
    -g * sum
}

/// `-(g/dx) ∫ h b' dx` over the cell for the given reconstruction, integrated
/// exactly piece by piece.
pub fn reconstruction_source(rec: &CellReconstruction, g: f64) -> f64 {
    // three-point Gauss-Legendre
    const NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
    const WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
    let dx = rec.dx();
    let bottom = rec.bottom();
    let mut edges = vec![-0.5 * dx];
    edges.extend(rec.breakpoints());
    edges.push(0.5 * dx);
    let mut integral = 0.0;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let rad = 0.5 * (b - a);
        for (node, weight) in NODES.iter().zip(WEIGHTS) {
            let x = mid + rad * node;
            integral += weight * rad * rec.eval_h(x) * bottom.deriv(x);
        }
    }
    -g * integral / dx
}

/// Source rate of one cell. Half-wet cells replace the spatial part of the
/// quadrature by the exact integral over the reconstruction, which keeps the
/// lake at rest exact there as well.
pub fn cell_source(rec: &CellReconstruction, inp: &SourceQuadratureInputs, g: f64) -> f64 {
    let tag = rec.tag();
    if tag.is_shore_left() || tag.is_shore_right() {
        let temporal = source_quadrature(inp, g) - source_quadrature(&inp.stationary(), g);
        temporal + reconstruction_source(rec, g)
    } else {
        source_quadrature(inp, g)
    }
}

/// Assembles the quadrature inputs of a cell.
pub fn source_inputs(
    rec: &CellReconstruction,
    n: [ConservedPair; 2],
    half: [ConservedPair; 2],
    full: [ConservedPair; 2],
) -> SourceQuadratureInputs {
    SourceQuadratureInputs {
        h_n: [n[0].h(), n[1].h()],
        h_half: [half[0].h(), half[1].h()],
        h_full: [full[0].h(), full[1].h()],
        h_center: rec.eval_h(quadrature_center(rec)),
        bottom: *rec.bottom(),
    }
}

/// Result of the draining loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DrainOutcome {
    /// Number of flux reductions performed.
    pub n_drained: usize,
    /// The iteration cap was reached before the loop settled.
    pub hit_cap: bool,
}

/// Reduces fluxes until no trial average falls below `-1e-14`.
///
/// `fluxes` holds `n_cells + 1` interface fluxes; on periodic grids the last
/// entry is an alias of the first and is kept identical.
pub fn draining_fixpoint(
    avg_h: &[f64],
    fluxes: &mut [InterfaceFlux],
    dt: f64,
    dx: f64,
    periodic: bool,
) -> DrainOutcome {
    let n = avg_h.len();
    assert_eq!(fluxes.len(), n + 1, "one flux per interface expected");
    let right_of = |i: usize| if periodic && i + 1 == n { 0 } else { i + 1 };
    let trial = |i: usize, f: &[InterfaceFlux]| avg_h[i] - dt * (f[right_of(i)].fh - f[i].fh) / dx;

    let mut queue: VecDeque<usize> = (0..n).collect();
    let mut queued = vec![true; n];
    let mut outcome = DrainOutcome::default();
    let cap = 10 * n.max(1);
    let mut iterations = 0;
    while let Some(i) = queue.pop_front() {
        queued[i] = false;
        iterations += 1;
        if iterations > cap {
            outcome.hit_cap = true;
            break;
        }
        if trial(i, fluxes) >= -DRY_AVG_TOL {
            continue;
        }
        let (l, r) = (i, right_of(i));
        let net = fluxes[r].fh - fluxes[l].fh;
        let factor = (avg_h[i] * dx / net / dt).clamp(0.0, 1.0);
        fluxes[l].scale(factor);
        if r != l {
            fluxes[r].scale(factor);
        }
        outcome.n_drained += 1;
        let mut touch = |k: usize| {
            if !queued[k] {
                queued[k] = true;
                queue.push_back(k);
            }
        };
        if i > 0 {
            touch(i - 1);
        } else if periodic {
            touch(n - 1);
        }
        if i + 1 < n {
            touch(i + 1);
        } else if periodic {
            touch(0);
        }
    }
    if periodic {
        fluxes[n] = fluxes[0];
    }
    outcome
}

/// New averages after the flux update and source addition.
#[derive(Debug, Clone, PartialEq)]
pub struct AverageUpdate {
    pub avg: Vec<ConservedPair>,
    /// Cells left empty; their adjacent point values must be zeroed.
    pub empty: Vec<bool>,
}

/// Applies flux differences, snaps vanishing averages to dry and adds the
/// momentum source in cells that still hold water.
pub fn apply_average_update(
    avg: &[ConservedPair],
    fluxes: &[InterfaceFlux],
    sources: &[f64],
    dt: f64,
    dx: f64,
) -> Result<AverageUpdate> {
    let n = avg.len();
    let mut out = Vec::with_capacity(n);
    let mut empty = Vec::with_capacity(n);
    for i in 0..n {
        let (fl, fr) = (fluxes[i], fluxes[i + 1]);
        let h = avg[i].h() - dt * (fr.fh - fl.fh) / dx;
        let m = avg[i].m() - dt * (fr.fm - fl.fm) / dx;
        // Cancellation in a drained deep cell leaves residue relative to the
        // size of the terms, not to 1.
        let scale = (avg[i].h() + dt * (fr.fh.abs() + fl.fh.abs()) / dx).max(1.0);
        if h.abs() <= DRY_AVG_TOL * scale {
            out.push(ConservedPair::DRY);
            empty.push(true);
        } else if h < 0.0 {
            return Err(SweError::Internal(format!(
                "cell {i} acquired negative average height {h:e} after draining"
            )));
        } else {
            out.push(ConservedPair::new(h, m + dt * sources[i])?);
            empty.push(false);
        }
    }
    Ok(AverageUpdate { avg: out, empty })
}
