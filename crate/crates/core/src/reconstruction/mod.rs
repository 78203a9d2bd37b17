//! Globally continuous, non-negative reconstruction of water height and
//! momentum inside a cell.
//!
//! Dispatch order:
//! 1. vanishing average: dry cell;
//! 2. both point values above a too-small average with a parabola that dips
//!    below zero: three linear segments (`CaseA`);
//! 3. dry or low right point: constant height on the right, linear surface
//!    on the left (`CaseB`, or its exceptional variant on concave bottoms);
//! 4. the mirror image (`CaseC`);
//! 5. surface well above the bottom: reconstruct `h + b` and subtract `b`;
//! 6. otherwise reconstruct `h` directly.

mod profile;
mod shore;

pub use profile::{in_limiter_set, limited_exponent, recon_dispatch, recon_limited, recon_parabolic, Profile};
pub use shore::{critical_parameters, exceptional_regime, shore_residual, solve_shore_cubic};

use crate::bottom::BottomCell;
use crate::error::{Result, SweError};
use crate::state::{ConservedPair, Constants};

/// Which reconstruction a cell received.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    Dry,
    DirectH,
    EquilibriumHB,
    CaseA,
    CaseB,
    CaseBExceptional,
    CaseC,
    CaseCExceptional,
}

impl CaseTag {
    pub const ALL: [CaseTag; 8] = [
        CaseTag::Dry,
        CaseTag::DirectH,
        CaseTag::EquilibriumHB,
        CaseTag::CaseA,
        CaseTag::CaseB,
        CaseTag::CaseBExceptional,
        CaseTag::CaseC,
        CaseTag::CaseCExceptional,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::Dry => "dry",
            CaseTag::DirectH => "direct-h",
            CaseTag::EquilibriumHB => "equilibrium",
            CaseTag::CaseA => "case-a",
            CaseTag::CaseB => "case-b",
            CaseTag::CaseBExceptional => "case-b-exceptional",
            CaseTag::CaseC => "case-c",
            CaseTag::CaseCExceptional => "case-c-exceptional",
        }
    }

    pub fn parse(s: &str) -> Option<CaseTag> {
        CaseTag::ALL.into_iter().find(|t| t.name() == s)
    }

    pub fn index(self) -> usize {
        CaseTag::ALL.iter().position(|&t| t == self).unwrap()
    }

    /// Dry side on the right (constant-height segment on the right).
    pub fn is_shore_right(self) -> bool {
        matches!(self, CaseTag::CaseB | CaseTag::CaseBExceptional)
    }

    pub fn is_shore_left(self) -> bool {
        matches!(self, CaseTag::CaseC | CaseTag::CaseCExceptional)
    }
}

/// Switches for the individual reconstruction ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReconOptions {
    /// Power-law limiting of the usual reconstruction.
    pub limiting: bool,
    /// Non-negative piecewise reconstructions (cases a, b, c).
    pub positivity: bool,
}

impl Default for ReconOptions {
    fn default() -> Self {
        ReconOptions { limiting: true, positivity: true }
    }
}

/// Linear function through `(x0, v0)` and `(x1, v1)`.
#[inline]
fn lerp(x0: f64, v0: f64, x1: f64, v1: f64, x: f64) -> f64 {
    if x == x1 {
        return v1;
    }
    v0 + (x - x0) * (v1 - v0) / (x1 - x0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Height {
    Zero,
    Direct(Profile),
    /// Profile of the surface `h + b`.
    Surface(Profile),
    /// Linear, constant at `level` on `[x1, -x1]`, linear.
    ThreeSegment { hl: f64, hr: f64, level: f64, x1: f64 },
    /// Linear surface from `(-dx/2, wl)` to `(x_split, w_split)` on the left;
    /// on the right, `h` is linear from `h_split` to `hr` (constant when equal).
    SurfaceThenLinear { wl: f64, w_split: f64, h_split: f64, hr: f64, x_split: f64 },
    /// `h` linear from `hl` to `h_split` on the left, then a linear surface
    /// from `(x_split, w_split)` to `(dx/2, wr)`.
    LinearThenSurface { hl: f64, h_split: f64, w_split: f64, wr: f64, x_split: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Momentum {
    Zero,
    Whole(Profile),
    ThreeSegment { left: Profile, mid: f64, right: Profile, x1: f64 },
    /// Profile left of `x_split`, constant right of it.
    ProfileThenConst { left: Profile, value: f64, x_split: f64 },
    ConstThenProfile { value: f64, right: Profile, x_split: f64 },
}

/// Case-specific parameters, kept for diagnostics and tests.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CaseParams {
    /// Central plateau factor (case a).
    pub f: Option<f64>,
    /// Left end of the plateau (case a).
    pub x1: Option<f64>,
    /// Kink of the exceptional reconstructions.
    pub y_star: Option<f64>,
    /// Height at the kink of the exceptional reconstructions.
    pub h_star: Option<f64>,
}

/// Reconstruction of `h` and `m` on one cell, local coordinate
/// `x ∈ [-dx/2, dx/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellReconstruction {
    tag: CaseTag,
    bottom: BottomCell,
    height: Height,
    momentum: Momentum,
    shore: Option<f64>,
    params: CaseParams,
    ends: [ConservedPair; 2],
}

impl CellReconstruction {
    pub fn tag(&self) -> CaseTag {
        self.tag
    }

    pub fn dx(&self) -> f64 {
        self.bottom.dx
    }

    pub fn bottom(&self) -> &BottomCell {
        &self.bottom
    }

    /// Shore location (local coordinate) for half-wet cells.
    pub fn shore(&self) -> Option<f64> {
        self.shore
    }

    pub fn params(&self) -> &CaseParams {
        &self.params
    }

    /// A dry cell.
    pub fn dry(bottom: BottomCell) -> Self {
        CellReconstruction {
            tag: CaseTag::Dry,
            bottom,
            height: Height::Zero,
            momentum: Momentum::Zero,
            shore: None,
            params: CaseParams::default(),
            ends: [ConservedPair::DRY; 2],
        }
    }

    /// Spatially constant state, used for extrapolating ghost cells.
    pub fn constant(q: ConservedPair, bottom: BottomCell) -> Self {
        if q.is_dry() {
            return CellReconstruction::dry(bottom);
        }
        let half = 0.5 * bottom.dx;
        CellReconstruction {
            tag: CaseTag::DirectH,
            bottom,
            height: Height::Direct(Profile::parabolic(q.h(), q.h(), q.h(), -half, half)),
            momentum: Momentum::Whole(Profile::parabolic(q.m(), q.m(), q.m(), -half, half)),
            shore: None,
            params: CaseParams::default(),
            ends: [q, q],
        }
    }

    /// Point values at the left and right cell boundary.
    pub fn ends(&self) -> [ConservedPair; 2] {
        self.ends
    }

    pub fn eval_h(&self, x: f64) -> f64 {
        let b = &self.bottom;
        if x <= -0.5 * b.dx {
            return self.ends[0].h();
        }
        if x >= 0.5 * b.dx {
            return self.ends[1].h();
        }
        match self.height {
            Height::Zero => 0.0,
            Height::Direct(p) => p.eval(x),
            Height::Surface(p) => p.eval(x) - b.eval(x),
            Height::ThreeSegment { hl, hr, level, x1 } => {
                let half = 0.5 * b.dx;
                if x <= x1 {
                    lerp(-half, hl, x1, level, x)
                } else if x <= -x1 {
                    level
                } else {
                    lerp(-x1, level, half, hr, x)
                }
            }
            Height::SurfaceThenLinear { wl, w_split, h_split, hr, x_split } => {
                let half = 0.5 * b.dx;
                if x < x_split {
                    lerp(-half, wl, x_split, w_split, x) - b.eval(x)
                } else if h_split == hr {
                    hr
                } else {
                    lerp(x_split, h_split, half, hr, x)
                }
            }
            Height::LinearThenSurface { hl, h_split, w_split, wr, x_split } => {
                let half = 0.5 * b.dx;
                if x < x_split {
                    if hl == h_split {
                        hl
                    } else {
                        lerp(-half, hl, x_split, h_split, x)
                    }
                } else {
                    lerp(x_split, w_split, half, wr, x) - b.eval(x)
                }
            }
        }
    }

    pub fn eval_m(&self, x: f64) -> f64 {
        if x <= -0.5 * self.bottom.dx {
            return self.ends[0].m();
        }
        if x >= 0.5 * self.bottom.dx {
            return self.ends[1].m();
        }
        match self.momentum {
            Momentum::Zero => 0.0,
            Momentum::Whole(p) => p.eval(x),
            Momentum::ThreeSegment { left, mid, right, x1 } => {
                if x <= x1 {
                    left.eval(x)
                } else if x <= -x1 {
                    mid
                } else {
                    right.eval(x)
                }
            }
            Momentum::ProfileThenConst { left, value, x_split } => {
                if x < x_split {
                    left.eval(x)
                } else {
                    value
                }
            }
            Momentum::ConstThenProfile { value, right, x_split } => {
                if x < x_split {
                    value
                } else {
                    right.eval(x)
                }
            }
        }
    }

    /// Regularized point evaluation; negative round-off heights become dry.
    #[inline]
    pub fn eval(&self, x: f64) -> ConservedPair {
        let h = self.eval_h(x);
        if h > 0.0 {
            ConservedPair::clamped(h, self.eval_m(x))
        } else {
            ConservedPair::DRY
        }
    }

    /// Break points of the piecewise definition, ordered, interior only.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = Vec::new();
        if let Height::ThreeSegment { x1, .. } = self.height {
            v.push(x1);
            v.push(-x1);
        }
        if let Some(s) = self.shore {
            v.push(s);
        }
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }
}

/// Local position at which the reconstructed height enters the source
/// quadrature: the cell center, or the midpoint of the wet part of a
/// half-wet cell.
pub fn quadrature_center(rec: &CellReconstruction) -> f64 {
    let half = 0.5 * rec.dx();
    match (rec.tag(), rec.shore()) {
        (t, Some(s)) if t.is_shore_right() => 0.5 * (-half + s),
        (t, Some(s)) if t.is_shore_left() => 0.5 * (s + half),
        _ => 0.0,
    }
}

/// Whether the parabola through `hl`, `hr` with mean `hbar` becomes negative
/// somewhere in the cell (valid for strictly positive arguments).
pub fn parabola_goes_negative(hbar: f64, hl: f64, hr: f64) -> bool {
    3.0 * hbar < hl + hr - (hl * hr).sqrt() && hbar < 0.5 * (hl + hr) - (hr - hl).abs() / 6.0
}

/// Validating wrapper around [`build_cell_reconstruction`] for raw inputs.
#[allow(clippy::too_many_arguments)]
pub fn build_from_raw(
    hbar: f64,
    hl: f64,
    hr: f64,
    mbar: f64,
    ml: f64,
    mr: f64,
    bottom: BottomCell,
    consts: &Constants,
    opts: ReconOptions,
) -> Result<CellReconstruction> {
    let mk = |h: f64, m: f64, what: &str| {
        ConservedPair::new(h, m).map_err(|_| SweError::NegativeHeight { h, location: what.into() })
    };
    Ok(build_cell_reconstruction(
        mk(hbar, mbar, "cell average")?,
        mk(hl, ml, "left point value")?,
        mk(hr, mr, "right point value")?,
        bottom,
        consts,
        opts,
    ))
}

/// Builds the reconstruction of one cell from its average and the two
/// adjacent point values.
pub fn build_cell_reconstruction(
    avg: ConservedPair,
    left: ConservedPair,
    right: ConservedPair,
    bottom: BottomCell,
    consts: &Constants,
    opts: ReconOptions,
) -> CellReconstruction {
    let (hbar, hl, hr) = (avg.h(), left.h(), right.h());
    let (mbar, ml, mr) = (avg.m(), left.m(), right.m());
    let dx = bottom.dx;
    let half = 0.5 * dx;
    let e_max = consts.e_max;
    let profile = |qbar, ql, qr, xl, xr| Profile::new(qbar, ql, qr, xl, xr, e_max, opts.limiting);

    if hbar < consts.dry_avg_tol {
        let mut rec = CellReconstruction::dry(bottom);
        rec.ends = [left, right];
        return rec;
    }

    if opts.positivity {
        let negative = parabola_goes_negative(hbar, hl, hr);
        if hbar < hl && hbar < hr && negative {
            let mut rec = case_a(hbar, hl, hr, mbar, ml, mr, bottom, &profile);
            rec.ends = [left, right];
            return rec;
        }
        if hr <= hbar && hbar < hl && (negative || hr == 0.0) {
            if let Some(mut rec) = case_b(hbar, hl, hr, mbar, ml, mr, bottom, &profile) {
                rec.ends = [left, right];
                return rec;
            }
        }
        if hl <= hbar && hbar < hr && (negative || hl == 0.0) {
            if let Some(mut rec) = case_c(hbar, hl, hr, mbar, ml, mr, bottom, &profile) {
                rec.ends = [left, right];
                return rec;
            }
        }
    }

    let momentum = Momentum::Whole(profile(mbar, ml, mr, -half, half));
    // The surface must clear the bottom everywhere in the cell, so that a
    // limited surface never produces a negative height.
    let wl = hl + bottom.left;
    let wr = hr + bottom.right;
    if wl.min(wr) > bottom.max_in_cell() {
        let surface = profile(hbar + bottom.average(), wl, wr, -half, half);
        CellReconstruction {
            tag: CaseTag::EquilibriumHB,
            bottom,
            height: Height::Surface(surface),
            momentum,
            shore: None,
            params: CaseParams::default(),
            ends: [left, right],
        }
    } else {
        CellReconstruction {
            tag: CaseTag::DirectH,
            bottom,
            height: Height::Direct(profile(hbar, hl, hr, -half, half)),
            momentum,
            shore: None,
            params: CaseParams::default(),
            ends: [left, right],
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn case_a(
    hbar: f64,
    hl: f64,
    hr: f64,
    mbar: f64,
    ml: f64,
    mr: f64,
    bottom: BottomCell,
    profile: &impl Fn(f64, f64, f64, f64, f64) -> Profile,
) -> CellReconstruction {
    let dx = bottom.dx;
    let half = 0.5 * dx;
    let sum = hl + hr;
    let f = 0.5f64.max(2.0 - sum / (2.0 * hbar));
    let x1 = (dx * (2.0 * hbar * (f - 2.0) + sum) / (4.0 * hbar * f - 2.0 * sum)).min(0.0);
    let momentum = if x1 < 0.0 {
        Momentum::ThreeSegment {
            left: profile(mbar, ml, mbar, -half, x1),
            mid: mbar,
            right: profile(mbar, mbar, mr, -x1, half),
            x1,
        }
    } else {
        // empty plateau
        Momentum::ThreeSegment {
            left: profile(mbar, ml, mbar, -half, 0.0),
            mid: mbar,
            right: profile(mbar, mbar, mr, 0.0, half),
            x1: 0.0,
        }
    };
    CellReconstruction {
        tag: CaseTag::CaseA,
        bottom,
        height: Height::ThreeSegment { hl, hr, level: f * hbar, x1 },
        momentum,
        shore: None,
        params: CaseParams { f: Some(f), x1: Some(x1), ..Default::default() },
        ends: [ConservedPair::DRY; 2],
    }
}

/// Relative width below which a sub-interval is treated as empty.
const DEGENERATE_WIDTH: f64 = 1e-12;

/// Momentum for reconstructions that are constant (`value`) right of `x_split`.
fn momentum_const_right(
    mbar: f64,
    ml: f64,
    mr: f64,
    x_split: f64,
    dx: f64,
    profile: &impl Fn(f64, f64, f64, f64, f64) -> Profile,
) -> Momentum {
    let half = 0.5 * dx;
    let wet = 0.5 + x_split / dx;
    let dry = 0.5 - x_split / dx;
    if wet < DEGENERATE_WIDTH || dry < DEGENERATE_WIDTH {
        return Momentum::Whole(profile(mbar, ml, mr, -half, half));
    }
    let left_mean = (mbar - dry * mr) / wet;
    Momentum::ProfileThenConst { left: profile(left_mean, ml, mr, -half, x_split), value: mr, x_split }
}

fn momentum_const_left(
    mbar: f64,
    ml: f64,
    mr: f64,
    x_split: f64,
    dx: f64,
    profile: &impl Fn(f64, f64, f64, f64, f64) -> Profile,
) -> Momentum {
    let half = 0.5 * dx;
    let dry = 0.5 + x_split / dx;
    let wet = 0.5 - x_split / dx;
    if wet < DEGENERATE_WIDTH || dry < DEGENERATE_WIDTH {
        return Momentum::Whole(profile(mbar, ml, mr, -half, half));
    }
    let right_mean = (mbar - dry * ml) / wet;
    Momentum::ConstThenProfile { value: ml, right: profile(right_mean, ml, mr, x_split, half), x_split }
}

#[allow(clippy::too_many_arguments)]
fn case_b(
    hbar: f64,
    hl: f64,
    hr: f64,
    mbar: f64,
    ml: f64,
    mr: f64,
    bottom: BottomCell,
    profile: &impl Fn(f64, f64, f64, f64, f64) -> Profile,
) -> Option<CellReconstruction> {
    let dx = bottom.dx;
    let (_, _, b2) = bottom.coefficients();
    let wl = hl + bottom.left;
    if let Some(xi) = solve_shore_cubic(hbar, hr, hl, b2, dx) {
        let x_star = dx * (xi - 0.5);
        return Some(CellReconstruction {
            tag: CaseTag::CaseB,
            bottom,
            height: Height::SurfaceThenLinear {
                wl,
                w_split: hr + bottom.eval(x_star),
                h_split: hr,
                hr,
                x_split: x_star,
            },
            momentum: momentum_const_right(mbar, ml, mr, x_star, dx, profile),
            shore: Some(x_star),
            params: CaseParams::default(),
            ends: [ConservedPair::DRY; 2],
        });
    }
    let (xi0, h_crit) = exceptional_regime(hbar, hr, hl, b2, dx)?;
    let y_star = dx * (xi0 - 0.5);
    let h_star = 2.0 * (hbar - h_crit) + hr;
    Some(CellReconstruction {
        tag: CaseTag::CaseBExceptional,
        bottom,
        height: Height::SurfaceThenLinear {
            wl,
            w_split: h_star + bottom.eval(y_star),
            h_split: h_star,
            hr,
            x_split: y_star,
        },
        momentum: momentum_const_right(mbar, ml, mr, y_star, dx, profile),
        shore: Some(y_star),
        params: CaseParams { y_star: Some(y_star), h_star: Some(h_star), ..Default::default() },
        ends: [ConservedPair::DRY; 2],
    })
}

#[allow(clippy::too_many_arguments)]
fn case_c(
    hbar: f64,
    hl: f64,
    hr: f64,
    mbar: f64,
    ml: f64,
    mr: f64,
    bottom: BottomCell,
    profile: &impl Fn(f64, f64, f64, f64, f64) -> Profile,
) -> Option<CellReconstruction> {
    let dx = bottom.dx;
    let (_, _, b2) = bottom.coefficients();
    let wr = hr + bottom.right;
    if let Some(xi) = solve_shore_cubic(hbar, hl, hr, b2, dx) {
        let x_star = dx * (0.5 - xi);
        return Some(CellReconstruction {
            tag: CaseTag::CaseC,
            bottom,
            height: Height::LinearThenSurface {
                hl,
                h_split: hl,
                w_split: hl + bottom.eval(x_star),
                wr,
                x_split: x_star,
            },
            momentum: momentum_const_left(mbar, ml, mr, x_star, dx, profile),
            shore: Some(x_star),
            params: CaseParams::default(),
            ends: [ConservedPair::DRY; 2],
        });
    }
    let (xi0, h_crit) = exceptional_regime(hbar, hl, hr, b2, dx)?;
    let y_star = dx * (0.5 - xi0);
    let h_star = 2.0 * (hbar - h_crit) + hl;
    Some(CellReconstruction {
        tag: CaseTag::CaseCExceptional,
        bottom,
        height: Height::LinearThenSurface {
            hl,
            h_split: h_star,
            w_split: h_star + bottom.eval(y_star),
            wr,
            x_split: y_star,
        },
        momentum: momentum_const_left(mbar, ml, mr, y_star, dx, profile),
        shore: Some(y_star),
        params: CaseParams { y_star: Some(y_star), h_star: Some(h_star), ..Default::default() },
        ends: [ConservedPair::DRY; 2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts() -> Constants {
        Constants::default()
    }

    fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let whole = (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let left = (m - a) / 6.0 * (f(a) + 4.0 * f(lm) + f(m));
        let right = (b - m) / 6.0 * (f(m) + 4.0 * f(rm) + f(b));
        if depth == 0 || (left + right - whole).abs() < 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            adaptive(f, a, m, 0.5 * tol, depth - 1) + adaptive(f, m, b, 0.5 * tol, depth - 1)
        }
    }

    fn cell_integral(rec: &CellReconstruction, f: &dyn Fn(f64) -> f64) -> f64 {
        let half = 0.5 * rec.dx();
        let mut nodes = vec![-half];
        nodes.extend(rec.breakpoints());
        nodes.push(half);
        nodes.windows(2).map(|w| adaptive(f, w[0], w[1], 1e-16, 40)).sum()
    }

    fn build(hbar: f64, hl: f64, hr: f64, mbar: f64, ml: f64, mr: f64, b: BottomCell) -> CellReconstruction {
        build_from_raw(hbar, hl, hr, mbar, ml, mr, b, &consts(), ReconOptions::default()).unwrap()
    }

    #[test]
    fn lake_at_rest_wet_cell_is_reproduced() {
        let b = BottomCell::from_samples(0.1, 0.25, 0.2, 0.1);
        let w = 1.0;
        let hbar = w - b.average();
        let rec = build(hbar, w - b.left, w - b.right, 0.0, 0.0, 0.0, b);
        assert_eq!(rec.tag(), CaseTag::EquilibriumHB);
        for k in 0..=20 {
            let x = -0.05 + 0.005 * k as f64;
            assert!((rec.eval_h(x) + b.eval(x) - w).abs() < 1e-15);
            assert_eq!(rec.eval_m(x), 0.0);
        }
    }

    #[test]
    fn case_a_plateau_geometry() {
        let dx = 0.3;
        let rec = build(0.2, 1.0, 1.0, 0.0, 0.0, 0.0, BottomCell::from_samples(0.0, 0.0, 0.0, dx));
        assert_eq!(rec.tag(), CaseTag::CaseA);
        let p = rec.params();
        assert_eq!(p.f, Some(0.5));
        assert!((p.x1.unwrap() + 7.0 / 18.0 * dx).abs() < 1e-15);
        let mass = cell_integral(&rec, &|x| rec.eval_h(x));
        assert!((mass - 0.2 * dx).abs() < 1e-14);
        assert_eq!(rec.eval_h(-0.5 * dx), 1.0);
        assert_eq!(rec.eval_h(0.5 * dx), 1.0);
        assert_eq!(rec.eval_m(0.0), 0.0);
    }

    #[test]
    fn flat_triangle_has_shore_at_center() {
        let rec = build(0.25, 1.0, 0.0, 0.0, 0.0, 0.0, BottomCell::from_samples(0.0, 0.0, 0.0, 1.0));
        assert_eq!(rec.tag(), CaseTag::CaseB);
        assert!(rec.shore().unwrap().abs() < 1e-15);
        assert!((quadrature_center(&rec) + 0.25).abs() < 1e-15);
        assert!((rec.eval_h(-0.25) - 0.5).abs() < 1e-15);
        assert_eq!(rec.eval_h(0.3), 0.0);
    }

    #[test]
    fn half_wet_lake_is_exact() {
        // b = x + 0.5 + 2 x^2 on [-1/2, 1/2]; shore where b = W
        let dx = 1.0;
        let bottom = BottomCell::from_coefficients(0.5, 1.0, 2.0, dx);
        let w = 0.6;
        let disc: f64 = 1.0 + 8.0 * (w - 0.5);
        let x_shore = (-1.0 + disc.sqrt()) / 4.0;
        let wet = |x: f64| (w - bottom.eval(x)).max(0.0);
        let hbar = adaptive(&wet, -0.5, x_shore, 1e-17, 50) / dx;
        let rec = build(hbar, w - bottom.left, 0.0, 0.0, 0.0, 0.0, bottom);
        assert_eq!(rec.tag(), CaseTag::CaseB);
        assert!((rec.shore().unwrap() - x_shore).abs() < 1e-12);
        for k in 0..=40 {
            let x = -0.5 + k as f64 / 40.0;
            let h = rec.eval_h(x);
            if x < x_shore - 1e-9 {
                assert!((h + bottom.eval(x) - w).abs() < 1e-12, "x = {x}");
            } else if x > x_shore + 1e-9 {
                assert_eq!(h, 0.0);
            }
            assert_eq!(rec.eval_m(x), 0.0);
        }
    }

    #[test]
    fn mirrored_half_wet_lake_is_exact() {
        let dx = 0.5;
        let bottom = BottomCell::from_coefficients(0.2, -0.8, 1.0, dx);
        let w = 0.3;
        let wet = |x: f64| (w - bottom.eval(x)).max(0.0);
        let hbar = adaptive(&wet, -0.25, 0.25, 1e-17, 50) / dx;
        let rec = build(hbar, 0.0, w - bottom.right, 0.0, 0.0, 0.0, bottom);
        assert_eq!(rec.tag(), CaseTag::CaseC);
        let s = rec.shore().unwrap();
        assert!((bottom.eval(s) - w).abs() < 1e-12);
        assert!(quadrature_center(&rec) > s);
        for k in 0..=40 {
            let x = -0.25 + 0.5 * k as f64 / 40.0;
            if x > s + 1e-9 {
                assert!((rec.eval_h(x) + bottom.eval(x) - w).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exceptional_branch_is_conservative_and_positive() {
        let dx = 0.1;
        let bottom = BottomCell::from_coefficients(0.0, 0.0, -100.0, dx);
        let (hbar, hl, hr) = (0.05, 0.1, 0.0);
        let rec = build(hbar, hl, hr, 0.05, 0.3, 0.0, bottom);
        assert_eq!(rec.tag(), CaseTag::CaseBExceptional);
        let mass = cell_integral(&rec, &|x| rec.eval_h(x));
        assert!((mass / dx - hbar).abs() < 1e-12 * hbar);
        let mom = cell_integral(&rec, &|x| rec.eval_m(x));
        assert!((mom / dx - 0.05).abs() < 1e-12);
        for k in 0..=1000 {
            assert!(rec.eval_h(-0.05 + 1e-4 * k as f64) >= -1e-13);
        }
        assert_eq!(rec.eval_h(0.05), 0.0);
        assert_eq!(rec.eval_h(-0.05), hl);

        let mirrored = build(hbar, hr, hl, 0.05, 0.0, 0.3, bottom);
        assert_eq!(mirrored.tag(), CaseTag::CaseCExceptional);
        let mass = cell_integral(&mirrored, &|x| mirrored.eval_h(x));
        assert!((mass / dx - hbar).abs() < 1e-12 * hbar);
    }

    #[test]
    fn random_inputs_are_conservative_and_non_negative() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..500 {
            let dx = 0.01 + next();
            let bottom = BottomCell::from_samples(next(), next(), next(), dx);
            let pick = |u: f64, v: f64| if u < 0.15 { 0.0 } else { 2.0 * v };
            let (hl, hr) = (pick(next(), next()), pick(next(), next()));
            let hbar = 1e-6 + 2.0 * next();
            let (mbar, ml, mr) = (next() - 0.5, if hl > 0.0 { next() - 0.5 } else { 0.0 }, if hr > 0.0 { next() - 0.5 } else { 0.0 });
            let rec = build(hbar, hl, hr, mbar, ml, mr, bottom);
            let mass = cell_integral(&rec, &|x| rec.eval_h(x)) / dx;
            assert!((mass - hbar).abs() <= 1e-11 * hbar.max(hl).max(hr), "{rec:?}");
            let mom = cell_integral(&rec, &|x| rec.eval_m(x)) / dx;
            assert!((mom - mbar).abs() <= 1e-11 * (1.0 + mbar.abs()), "{rec:?}");
            assert_eq!(rec.eval_h(-0.5 * dx), hl);
            assert_eq!(rec.eval_h(0.5 * dx), hr);
            for k in 0..=200 {
                let x = dx * (k as f64 / 200.0 - 0.5);
                assert!(rec.eval_h(x) >= -1e-13, "{rec:?} at {x}");
            }
        }
    }

    #[test]
    fn sign_change_predicate() {
        assert!(parabola_goes_negative(0.2, 1.0, 1.0));
        assert!(!parabola_goes_negative(1.0, 1.0, 1.0));
    }

    #[test]
    fn tags_round_trip() {
        for t in CaseTag::ALL {
            assert_eq!(CaseTag::parse(t.name()), Some(t));
        }
    }
}
