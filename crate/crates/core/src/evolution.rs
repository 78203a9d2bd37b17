//! Characteristic evolution of interface point values.
//!
//! Each point is advanced by tracing the two characteristic families back to
//! the data at `t^n`, with a midpoint predictor for the speeds and source
//! terms. On top of this sit the entropy fix, the vacuum guard, the
//! lake-at-rest correction and the freezing of near-dry values.

use rayon::prelude::*;

use crate::bottom::BottomTopography;
use crate::characteristics::{char_speeds, from_char, speeds, to_char};
use crate::grid::{BoundaryKind, Grid};
use crate::reconstruction::CellReconstruction;
use crate::state::{ConservedPair, Constants, SolutionState};

/// Which data location fed the predictor speeds of a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftOrigin {
    PlusDx,
    MinusDx,
    /// Speeds taken at the point itself (no entropy fix).
    Centered,
}

/// Speeds and sources of both characteristic families for one candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateSet {
    pub speed_plus: f64,
    pub speed_minus: f64,
    pub source_plus: f64,
    pub source_minus: f64,
    pub shift_origin: ShiftOrigin,
}

impl CandidateSet {
    pub fn speed_sum(&self) -> f64 {
        self.speed_plus.abs() + self.speed_minus.abs()
    }

    fn speeds(&self) -> [f64; 2] {
        [self.speed_plus, self.speed_minus]
    }

    fn sources(&self) -> [f64; 2] {
        [self.source_plus, self.source_minus]
    }

    pub fn is_vacuum(&self) -> bool {
        self.speed_plus == 0.0
            && self.speed_minus == 0.0
            && self.source_plus == 0.0
            && self.source_minus == 0.0
    }
}

/// Switches of the point update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvolutionOptions {
    pub entropy_fix: bool,
    pub well_balance: bool,
}

impl Default for EvolutionOptions {
    fn default() -> Self {
        EvolutionOptions { entropy_fix: true, well_balance: true }
    }
}

/// Slope of the projected bottom. On an interface the one-sided slopes of
/// the two adjacent parabolae are averaged.
pub fn bottom_slope(bottom: &BottomTopography, x: f64) -> f64 {
    let grid = bottom.grid();
    let (k, local) = grid.locate(x);
    let half = 0.5 * grid.dx;
    let right = bottom.cell(k).deriv(local);
    let has_left_neighbour = k > -1 || grid.boundary == BoundaryKind::Periodic;
    if local == -half && has_left_neighbour {
        let left_cell = if k == 0 && grid.boundary == BoundaryKind::Periodic {
            grid.n_cells as isize - 1
        } else {
            k - 1
        };
        0.5 * (right + bottom.cell(left_cell).deriv(half))
    } else {
        right
    }
}

/// Predicted characteristic values `Q*_{j,i}` for both families `i`, laid out
/// as `[family][component]`, for speeds estimated from the data at `x0 + shift`.
pub fn predictor(
    x0: f64,
    shift: f64,
    t: f64,
    data: &impl Fn(f64) -> ConservedPair,
    bottom: &BottomTopography,
    g: f64,
) -> [[f64; 2]; 2] {
    predictor_with_speeds(x0, speeds(data(x0 + shift), g), t, data, bottom, g)
}

fn predictor_with_speeds(
    x0: f64,
    (lp, lm): (f64, f64),
    t: f64,
    data: &impl Fn(f64) -> ConservedPair,
    bottom: &BottomTopography,
    g: f64,
) -> [[f64; 2]; 2] {
    let slope = bottom_slope(bottom, x0);
    let half_src = [-0.5 * t * g * slope, 0.5 * t * g * slope];
    let q_pp = to_char(data(x0 - lp * t), g);
    let q_mm = to_char(data(x0 - lm * t), g);
    let q_pm = to_char(data(x0 - 0.5 * (lp + lm) * t), g);
    [
        [q_pp.0 + half_src[0], q_pm.1 + half_src[1]],
        [q_pm.0 + half_src[0], q_mm.1 + half_src[1]],
    ]
}

/// Speeds and sources of one candidate.
pub fn candidate(
    x0: f64,
    origin: ShiftOrigin,
    t: f64,
    data: &impl Fn(f64) -> ConservedPair,
    bottom: &BottomTopography,
    g: f64,
) -> CandidateSet {
    let dx = bottom.grid().dx;
    let shift = match origin {
        ShiftOrigin::PlusDx => dx,
        ShiftOrigin::MinusDx => -dx,
        ShiftOrigin::Centered => 0.0,
    };
    let lam = speeds(data(x0 + shift), g);
    let star = predictor_with_speeds(x0, lam, t, data, bottom, g);
    let speed_plus = char_speeds(star[0][0], star[0][1], g).0;
    let speed_minus = char_speeds(star[1][0], star[1][1], g).1;
    let source_plus = -g * bottom_slope(bottom, x0 - 0.5 * lam.0 * t);
    let source_minus = g * bottom_slope(bottom, x0 - 0.5 * lam.1 * t);
    CandidateSet { speed_plus, speed_minus, source_plus, source_minus, shift_origin: origin }
}

/// Picks the candidate with the larger `|λ+*| + |λ-*|`; ties go to the
/// `+dx` candidate.
pub fn entropy_fix_select(c1: CandidateSet, c2: CandidateSet) -> CandidateSet {
    let (plus, minus) = if c2.shift_origin == ShiftOrigin::PlusDx { (c2, c1) } else { (c1, c2) };
    if minus.speed_sum() > plus.speed_sum() {
        minus
    } else {
        plus
    }
}

/// A vanishing speed signals a footpoint in vacuum; the point then keeps its
/// current value for this step.
pub fn vacuum_guard(c: CandidateSet) -> CandidateSet {
    if c.speed_plus == 0.0 || c.speed_minus == 0.0 {
        CandidateSet { speed_plus: 0.0, speed_minus: 0.0, source_plus: 0.0, source_minus: 0.0, ..c }
    } else {
        c
    }
}

/// Candidate actually used at `x0`, after entropy fix and vacuum guard.
pub fn select_candidate(
    x0: f64,
    t: f64,
    data: &impl Fn(f64) -> ConservedPair,
    bottom: &BottomTopography,
    g: f64,
    entropy_fix: bool,
) -> CandidateSet {
    let chosen = if entropy_fix {
        entropy_fix_select(
            candidate(x0, ShiftOrigin::PlusDx, t, data, bottom, g),
            candidate(x0, ShiftOrigin::MinusDx, t, data, bottom, g),
        )
    } else {
        candidate(x0, ShiftOrigin::Centered, t, data, bottom, g)
    };
    vacuum_guard(chosen)
}

/// Point value at `x0` after time `t` without the lake-at-rest correction.
pub fn evolve_point_raw(
    x0: f64,
    t: f64,
    data: &impl Fn(f64) -> ConservedPair,
    bottom: &BottomTopography,
    g: f64,
    entropy_fix: bool,
) -> ConservedPair {
    let c = select_candidate(x0, t, data, bottom, g, entropy_fix);
    if c.is_vacuum() {
        return data(x0);
    }
    let lam = c.speeds();
    let src = c.sources();
    let here = data(x0);
    let foot_p = data(x0 - lam[0] * t);
    let foot_m = data(x0 - lam[1] * t);
    // A dry point only gets wet once both characteristics reach back into
    // water. Mixing a wet invariant with the zero invariant of a dry
    // footpoint otherwise turns the fluid velocity into a spurious depth.
    if here.is_dry() && (foot_p.is_dry() || foot_m.is_dry()) {
        return here;
    }
    let qp = to_char(foot_p, g).0 + t * src[0];
    let qm = to_char(foot_m, g).1 + t * src[1];
    from_char(qp, qm, g)
}

/// Subtracts the spurious evolution of the lake at rest through `x0`.
/// Returns `raw` unchanged when the gate conditions fail.
#[allow(clippy::too_many_arguments)]
pub fn well_balance_correct(
    x0: f64,
    t: f64,
    q0: ConservedPair,
    raw: ConservedPair,
    bottom: &BottomTopography,
    consts: &Constants,
    entropy_fix: bool,
) -> ConservedPair {
    if !(q0.h() > 0.0) || q0.froude(consts.g) >= consts.froude_wb_threshold {
        return raw;
    }
    let level = q0.h() + bottom.eval_global(x0);
    let lake = |x: f64| ConservedPair::clamped(level - bottom.eval_global(x), 0.0);
    let fict = evolve_point_raw(x0, t, &lake, bottom, consts.g, entropy_fix);
    if !(fict.h() > 0.0) {
        return raw;
    }
    let h = raw.h() - (fict.h() - q0.h());
    let m = raw.m() - fict.m() * (raw.h() / fict.h());
    ConservedPair::clamped(h, m)
}

/// Full point update at `x0`: raw evolution plus the lake-at-rest correction.
pub fn evolve_point(
    x0: f64,
    t: f64,
    data: &impl Fn(f64) -> ConservedPair,
    bottom: &BottomTopography,
    consts: &Constants,
    opts: EvolutionOptions,
) -> ConservedPair {
    let raw = evolve_point_raw(x0, t, data, bottom, consts.g, opts.entropy_fix);
    if opts.well_balance {
        well_balance_correct(x0, t, data(x0), raw, bottom, consts, opts.entropy_fix)
    } else {
        raw
    }
}

/// Frozen snapshot of the data at `t^n`: one reconstruction per cell,
/// ghosts included (`recons[i + 1]` is cell `i` for `i ∈ -1..=n`).
#[derive(Debug, Clone)]
pub struct EvolutionContext<'a> {
    pub recons: &'a [CellReconstruction],
    pub bottom: &'a BottomTopography,
    pub consts: Constants,
    pub opts: EvolutionOptions,
}

impl<'a> EvolutionContext<'a> {
    pub fn grid(&self) -> &Grid {
        self.bottom.grid()
    }

    /// Data at `t^n` at a global position.
    #[inline]
    pub fn initial(&self, x: f64) -> ConservedPair {
        let (k, local) = self.grid().locate(x);
        self.recons[(k + 1) as usize].eval(local)
    }

    /// Evolved value of interface `j` after time `t`.
    pub fn evolve_interface(&self, j: usize, t: f64) -> ConservedPair {
        let x0 = self.grid().interface(j as isize);
        let data = |x: f64| self.initial(x);
        evolve_point(x0, t, &data, self.bottom, &self.consts, self.opts)
    }
}

/// Half-step and full-step point values after freezing, together with the
/// updated freeze bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct PointUpdate {
    pub half: Vec<ConservedPair>,
    pub full: Vec<ConservedPair>,
    pub frozen: Vec<Option<ConservedPair>>,
}

/// Freezing rule for one point. Returns `(half, full, frozen)`.
pub fn apply_freeze(
    previous: ConservedPair,
    half: ConservedPair,
    full: ConservedPair,
    eps: f64,
) -> (ConservedPair, ConservedPair, Option<ConservedPair>) {
    if full.h() < eps {
        let marker = if previous.is_dry() && full.is_dry() { None } else { Some(previous) };
        (previous, previous, marker)
    } else if half.h() < eps {
        (previous, full, None)
    } else {
        (half, full, None)
    }
}

/// Boundary value at a Dirichlet end. The freely evolved value already
/// carries the invariants of the frozen ghost state along the incoming
/// characteristics, which is the right condition at an outflow. At a
/// subcritical inflow the momentum is prescribed instead and the height
/// follows from the outgoing invariant, so the inflow rate is held exactly.
pub fn dirichlet_point(evolved: ConservedPair, prescribed: ConservedPair, left: bool, g: f64) -> ConservedPair {
    let c = (g * prescribed.h()).sqrt();
    // velocity measured into the domain
    let v_in = if left { prescribed.velocity() } else { -prescribed.velocity() };
    if prescribed.is_dry() || v_in <= 0.0 {
        return evolved;
    }
    if v_in >= c {
        return prescribed;
    }
    let (qp, qm) = to_char(evolved, g);
    let outgoing = if left { qm } else { qp };
    // 2 sqrt(g h) - |m| / h is increasing in h
    let flux_in = prescribed.m().abs();
    let residual = |h: f64| 2.0 * (g * h).sqrt() - flux_in / h - outgoing;
    let (mut lo, mut hi) = (0.0, prescribed.h().max(evolved.h()));
    while residual(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    ConservedPair::clamped(hi, prescribed.m())
}

/// Evolves every interface to `t^n + dt/2` and `t^n + dt`.
pub fn update_all_points(state: &SolutionState, ctx: &EvolutionContext<'_>, dt: f64) -> PointUpdate {
    let grid = ctx.grid();
    let n_pts = grid.n_points();
    let last_free = match grid.boundary {
        BoundaryKind::Periodic => n_pts - 1,
        _ => n_pts,
    };
    let eps = ctx.consts.eps_freeze;
    let results: Vec<(ConservedPair, ConservedPair, Option<ConservedPair>)> = (0..n_pts)
        .into_par_iter()
        .map(|j| {
            let previous = state.pts[j];
            if j >= last_free {
                return (previous, previous, state.frozen[j]);
            }
            let mut half = ctx.evolve_interface(j, 0.5 * dt);
            let mut full = ctx.evolve_interface(j, dt);
            if grid.boundary == BoundaryKind::DirichletFrozen && (j == 0 || j == n_pts - 1) {
                let left = j == 0;
                let ghost = if left { ctx.recons[0].ends()[1] } else { ctx.recons[n_pts].ends()[0] };
                half = dirichlet_point(half, ghost, left, ctx.consts.g);
                full = dirichlet_point(full, ghost, left, ctx.consts.g);
            }
            apply_freeze(previous, half, full, eps)
        })
        .collect();
    let mut half = Vec::with_capacity(n_pts);
    let mut full = Vec::with_capacity(n_pts);
    let mut frozen = Vec::with_capacity(n_pts);
    for (a, b, c) in results {
        half.push(a);
        full.push(b);
        frozen.push(c);
    }
    if grid.boundary == BoundaryKind::Periodic {
        half[n_pts - 1] = half[0];
        full[n_pts - 1] = full[0];
        frozen[n_pts - 1] = frozen[0];
    }
    PointUpdate { half, full, frozen }
}
