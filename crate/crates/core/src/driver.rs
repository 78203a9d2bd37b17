//! Time stepping, boundary handling and initialization.

use rayon::prelude::*;

use crate::averages::{apply_average_update, cell_source, draining_fixpoint, simpson_flux, source_inputs, InterfaceFlux};
use crate::bottom::BottomTopography;
use crate::characteristics::max_speed;
use crate::error::{Result, SweError};
use crate::evolution::{update_all_points, EvolutionContext, EvolutionOptions};
use crate::grid::{BoundaryKind, Grid};
use crate::reconstruction::{build_cell_reconstruction, CaseTag, CellReconstruction, ReconOptions};
use crate::state::{ConservedPair, Constants, SolutionState};

/// Switches for the ingredients of the scheme. Everything is on by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeOptions {
    pub limiting: bool,
    pub positivity: bool,
    pub entropy_fix: bool,
    pub well_balance: bool,
}

impl Default for SchemeOptions {
    fn default() -> Self {
        SchemeOptions { limiting: true, positivity: true, entropy_fix: true, well_balance: true }
    }
}

impl SchemeOptions {
    pub fn recon(&self) -> ReconOptions {
        ReconOptions { limiting: self.limiting, positivity: self.positivity }
    }

    pub fn evolution(&self) -> EvolutionOptions {
        EvolutionOptions { entropy_fix: self.entropy_fix, well_balance: self.well_balance }
    }
}

/// Per-step diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub step: usize,
    /// Time at the end of the step.
    pub t: f64,
    pub dt: f64,
    pub n_drained_cells: usize,
    pub n_frozen_points: usize,
    /// Number of cells per reconstruction case, indexed by [`CaseTag::index`].
    pub n_cells_per_case: [usize; 8],
    pub max_froude: f64,
    /// The draining loop stopped at its iteration cap.
    pub drain_cap_hit: bool,
    /// Every point was dry when the step size was chosen.
    pub all_dry: bool,
}

impl StepReport {
    pub const CSV_HEADER: &'static str =
        "step,t,dt,n_drained_cells,n_frozen_points,dry,direct_h,equilibrium,case_a,case_b,case_b_exceptional,case_c,case_c_exceptional,max_froude";

    pub fn csv_row(&self) -> String {
        let cases: Vec<String> = self.n_cells_per_case.iter().map(|c| c.to_string()).collect();
        format!(
            "{},{},{},{},{},{},{}",
            self.step,
            self.t,
            self.dt,
            self.n_drained_cells,
            self.n_frozen_points,
            cases.join(","),
            self.max_froude
        )
    }
}

/// `cfl · dx / max(|v| + c)` over all point values. Returns the step and
/// whether the all-dry fallback `cfl · dx / sqrt(g)` was used.
pub fn compute_dt(state: &SolutionState, grid: &Grid, consts: &Constants) -> (f64, bool) {
    let s = state.pts.iter().map(|q| max_speed(*q, consts.g)).fold(0.0, f64::max);
    if s > 0.0 {
        (consts.cfl * grid.dx / s, false)
    } else {
        (consts.cfl * grid.dx / consts.g.sqrt(), true)
    }
}

/// Cell average over `[a, b]` from Simpson's rule, scaled to the cell width.
fn partial_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, dx: f64) -> f64 {
    (f(a) + 4.0 * f(0.5 * (a + b)) + f(b)) / 6.0 * ((b - a) / dx)
}

/// Bisection for the sign change of `wet` between `a` (wet iff `wet_a`) and `b`.
fn bisect_shore(h0: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let wet_a = h0(a) > 0.0;
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (h0(m) > 0.0) == wet_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Number of sub-samples used to detect shores inside a cell.
const SHORE_SAMPLES: usize = 16;

/// Average of one cell over `[xl, xr]`, integrating only the wet part when the
/// cell contains a shore.
pub fn initial_cell_average(
    h0: &dyn Fn(f64) -> f64,
    m0: &dyn Fn(f64) -> f64,
    xl: f64,
    xr: f64,
    cell: isize,
) -> Result<ConservedPair> {
    let dx = xr - xl;
    let xs: Vec<f64> = (0..=SHORE_SAMPLES)
        .map(|k| if k == SHORE_SAMPLES { xr } else { xl + dx * k as f64 / SHORE_SAMPLES as f64 })
        .collect();
    let wet: Vec<bool> = xs.iter().map(|&x| h0(x) > 0.0).collect();
    let changes: Vec<usize> = (0..SHORE_SAMPLES).filter(|&k| wet[k] != wet[k + 1]).collect();
    let hc = |x: f64| h0(x).max(0.0);
    let mc = |x: f64| if h0(x) > 0.0 { m0(x) } else { 0.0 };
    let (a, b) = match changes.as_slice() {
        [] if !wet[0] => return Ok(ConservedPair::DRY),
        [] => (xl, xr),
        [k] => {
            let s = bisect_shore(h0, xs[*k], xs[k + 1], 1e-14 * dx);
            if wet[*k] {
                (xl, s)
            } else {
                (s, xr)
            }
        }
        _ => return Err(SweError::MultipleShores { cell }),
    };
    let h = partial_simpson(&hc, a, b, dx);
    let m = partial_simpson(&mc, a, b, dx);
    ConservedPair::new(h, m)
}

fn point_value(h0: &dyn Fn(f64) -> f64, m0: &dyn Fn(f64) -> f64, x: f64) -> Result<ConservedPair> {
    let h = h0(x);
    let m = m0(x);
    if !h.is_finite() || !m.is_finite() {
        return Err(SweError::InvalidInput(format!("initial data not finite at x = {x}")));
    }
    Ok(ConservedPair::clamped(h, m))
}

/// Point values and averages of the initial data.
pub fn initialize(
    h0: &dyn Fn(f64) -> f64,
    m0: &dyn Fn(f64) -> f64,
    bottom: &BottomTopography,
) -> Result<SolutionState> {
    let grid = bottom.grid();
    let n = grid.n_cells;
    let mut pts = (0..=n).map(|j| point_value(h0, m0, grid.interface(j as isize))).collect::<Result<Vec<_>>>()?;
    if grid.boundary == BoundaryKind::Periodic {
        pts[n] = pts[0];
    }
    let avg = (0..n)
        .map(|i| {
            let i = i as isize;
            initial_cell_average(h0, m0, grid.interface(i), grid.interface(i + 1), i)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SolutionState { avg, pts, frozen: vec![None; n + 1], t: 0.0 })
}

/// Complete simulation: grid, bottom, constants and the evolving state.
#[derive(Debug, Clone)]
pub struct Simulation {
    bottom: BottomTopography,
    consts: Constants,
    opts: SchemeOptions,
    state: SolutionState,
    /// Ghost reconstructions held fixed for Dirichlet boundaries.
    fixed_ghosts: Option<[CellReconstruction; 2]>,
    /// Mass that left through the boundaries so far (outflow positive).
    boundary_outflow: f64,
    steps: usize,
}

impl Simulation {
    /// Sets up a run from analytic initial data.
    pub fn new(
        bottom: BottomTopography,
        h0: &dyn Fn(f64) -> f64,
        m0: &dyn Fn(f64) -> f64,
        consts: Constants,
        opts: SchemeOptions,
    ) -> Result<Self> {
        consts.validate()?;
        let state = initialize(h0, m0, &bottom)?;
        let grid = *bottom.grid();
        let fixed_ghosts = if grid.boundary == BoundaryKind::DirichletFrozen {
            let n = grid.n_cells as isize;
            let mut ghosts = Vec::with_capacity(2);
            for i in [-1, n] {
                let avg = initial_cell_average(h0, m0, grid.interface(i), grid.interface(i + 1), i)?;
                let left = point_value(h0, m0, grid.interface(i))?;
                let right = point_value(h0, m0, grid.interface(i + 1))?;
                ghosts.push(build_cell_reconstruction(avg, left, right, bottom.cell(i), &consts, opts.recon()));
            }
            Some([ghosts[0], ghosts[1]])
        } else {
            None
        };
        Ok(Simulation { bottom, consts, opts, state, fixed_ghosts, boundary_outflow: 0.0, steps: 0 })
    }

    /// Wraps an existing state.
    pub fn from_state(
        bottom: BottomTopography,
        state: SolutionState,
        consts: Constants,
        opts: SchemeOptions,
    ) -> Result<Self> {
        consts.validate()?;
        let n = bottom.grid().n_cells;
        if state.avg.len() != n || state.pts.len() != n + 1 || state.frozen.len() != n + 1 {
            return Err(SweError::GridMismatch(format!(
                "state has {} averages and {} points, grid has {n} cells",
                state.avg.len(),
                state.pts.len()
            )));
        }
        if bottom.grid().boundary == BoundaryKind::DirichletFrozen {
            return Err(SweError::InvalidInput(
                "Dirichlet boundaries need analytic initial data; use Simulation::new".into(),
            ));
        }
        Ok(Simulation { bottom, consts, opts, state, fixed_ghosts: None, boundary_outflow: 0.0, steps: 0 })
    }

    pub fn state(&self) -> &SolutionState {
        &self.state
    }

    pub fn grid(&self) -> &Grid {
        self.bottom.grid()
    }

    pub fn bottom(&self) -> &BottomTopography {
        &self.bottom
    }

    pub fn constants(&self) -> &Constants {
        &self.consts
    }

    pub fn options(&self) -> &SchemeOptions {
        &self.opts
    }

    pub fn time(&self) -> f64 {
        self.state.t
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Total mass that has left through the domain boundaries.
    pub fn boundary_outflow(&self) -> f64 {
        self.boundary_outflow
    }

    pub fn total_mass(&self) -> f64 {
        self.state.total_mass(self.grid().dx)
    }

    /// Reconstructions of all cells including one ghost per side
    /// (`[i + 1]` is cell `i`).
    pub fn reconstructions(&self) -> Vec<CellReconstruction> {
        let grid = *self.grid();
        let n = grid.n_cells;
        let st = &self.state;
        let recon_opts = self.opts.recon();
        let interior: Vec<CellReconstruction> = (0..n)
            .into_par_iter()
            .map(|i| {
                build_cell_reconstruction(
                    st.avg[i],
                    st.pts[i],
                    st.pts[i + 1],
                    self.bottom.cell(i as isize),
                    &self.consts,
                    recon_opts,
                )
            })
            .collect();
        let (left, right) = match grid.boundary {
            BoundaryKind::Periodic => (interior[n - 1], interior[0]),
            BoundaryKind::DirichletFrozen => {
                let g = self.fixed_ghosts.expect("Dirichlet ghosts are set at construction");
                (g[0], g[1])
            }
            BoundaryKind::OutflowExtrapolate => (
                CellReconstruction::constant(st.pts[0], self.bottom.cell(-1)),
                CellReconstruction::constant(st.pts[n], self.bottom.cell(n as isize)),
            ),
        };
        let mut all = Vec::with_capacity(n + 2);
        all.push(left);
        all.extend(interior);
        all.push(right);
        all
    }

    /// Advances by one step of the CFL-limited size, or `max_dt` if smaller.
    pub fn step(&mut self, max_dt: Option<f64>) -> Result<StepReport> {
        let (dt_cfl, all_dry) = compute_dt(&self.state, self.grid(), &self.consts);
        let dt = max_dt.map_or(dt_cfl, |m| m.min(dt_cfl));
        self.step_with_dt(dt, all_dry)
    }

    /// One step with a prescribed `dt` (the caller is responsible for the CFL
    /// condition).
    pub fn step_with_dt(&mut self, dt: f64, all_dry: bool) -> Result<StepReport> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(SweError::InvalidInput(format!("time step must be positive, got {dt}")));
        }
        let grid = *self.grid();
        let n = grid.n_cells;
        let dx = grid.dx;
        let g = self.consts.g;
        let periodic = grid.boundary == BoundaryKind::Periodic;

        let recons = self.reconstructions();
        let ctx = EvolutionContext {
            recons: &recons,
            bottom: &self.bottom,
            consts: self.consts,
            opts: self.opts.evolution(),
        };
        let points = update_all_points(&self.state, &ctx, dt);
        let pts_n = &self.state.pts;

        let mut fluxes: Vec<InterfaceFlux> =
            (0..=n).map(|j| simpson_flux(pts_n[j], points.half[j], points.full[j], g)).collect();
        let avg_h: Vec<f64> = self.state.avg.iter().map(|q| q.h()).collect();
        let drain = draining_fixpoint(&avg_h, &mut fluxes, dt, dx, periodic);

        let sources: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let rec = &recons[i + 1];
                if rec.tag() == CaseTag::Dry {
                    return 0.0;
                }
                let inp = source_inputs(
                    rec,
                    [pts_n[i], pts_n[i + 1]],
                    [points.half[i], points.half[i + 1]],
                    [points.full[i], points.full[i + 1]],
                );
                cell_source(rec, &inp, g)
            })
            .collect();
        let update = apply_average_update(&self.state.avg, &fluxes, &sources, dt, dx)?;

        let mut pts = points.full;
        let mut frozen = points.frozen;
        for (i, &empty) in update.empty.iter().enumerate() {
            if empty {
                for j in [i, i + 1] {
                    pts[j] = ConservedPair::DRY;
                    frozen[j] = None;
                }
            }
        }
        if periodic && (update.empty[0] || update.empty[n - 1]) {
            pts[0] = ConservedPair::DRY;
            pts[n] = ConservedPair::DRY;
            frozen[0] = None;
            frozen[n] = None;
        }
        if !periodic {
            self.boundary_outflow += dt * (fluxes[n].fh - fluxes[0].fh);
        }

        let mut histogram = [0usize; 8];
        for rec in &recons[1..=n] {
            histogram[rec.tag().index()] += 1;
        }
        let max_froude = self.state.pts.iter().map(|q| q.froude(g)).fold(0.0, f64::max);

        self.state = SolutionState { avg: update.avg, pts, frozen, t: self.state.t + dt };
        self.steps += 1;
        Ok(StepReport {
            step: self.steps,
            t: self.state.t,
            dt,
            n_drained_cells: drain.n_drained,
            n_frozen_points: self.state.n_frozen(),
            n_cells_per_case: histogram,
            max_froude,
            drain_cap_hit: drain.hit_cap,
            all_dry,
        })
    }

    /// Runs until `t_end`, shortening the last step to land on it exactly.
    /// The callback sees every step report.
    pub fn run_until(&mut self, t_end: f64, mut on_step: impl FnMut(&StepReport)) -> Result<usize> {
        let mut count = 0;
        while self.state.t < t_end {
            let remaining = t_end - self.state.t;
            if remaining <= 1e-14 * t_end.abs().max(1.0) {
                break;
            }
            let report = self.step(Some(remaining))?;
            on_step(&report);
            count += 1;
        }
        Ok(count)
    }
}
