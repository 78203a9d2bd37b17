//! Independent reference computations shared by the acceptance and property
//! tests. Nothing here calls into the solver except to build the object under
//! test.

#![allow(dead_code)]

use active_flux_swe::averages::{cell_source, draining_fixpoint, source_inputs, InterfaceFlux};
use active_flux_swe::bottom::BottomCell;
use active_flux_swe::driver::Simulation;
use active_flux_swe::reconstruction::{build_cell_reconstruction, CellReconstruction, ReconOptions};
use active_flux_swe::state::{ConservedPair, Constants};
use rand::Rng;

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1], non-negative half.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for k in 0..7 {
        let s = f(c - r * XGK[k]) + f(c + r * XGK[k]);
        kronrod += WGK[k] * s;
        if k % 2 == 1 {
            gauss += WG[k / 2] * s;
        }
    }
    (kronrod * r, (kronrod - gauss).abs() * r)
}

/// Adaptive Gauss-Kronrod integral of `f` over `[a, b]` to absolute
/// tolerance `tol`.
pub fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        // heights computed as surface minus bottom carry cancellation noise,
        // so the depth cap keeps a noisy integrand from splitting forever
        if err <= tol || depth >= 30 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth + 1) + rec(f, m, b, 0.5 * tol, depth + 1)
    }
    rec(f, a, b, tol, 0)
}

/// Integral over the cell, split at the reconstruction's breakpoints so that
/// every piece is smooth.
pub fn integrate_cell(rec: &CellReconstruction, f: impl Fn(f64) -> f64, tol: f64) -> f64 {
    let half = 0.5 * rec.dx();
    let mut edges = vec![-half];
    edges.extend(rec.breakpoints().into_iter().filter(|&x| x > -half && x < half));
    edges.push(half);
    edges.windows(2).map(|w| integrate(&f, w[0], w[1], tol)).sum()
}

/// One randomized reconstruction input.
#[derive(Debug, Clone, Copy)]
pub struct ReconInput {
    pub avg: ConservedPair,
    pub left: ConservedPair,
    pub right: ConservedPair,
    pub bottom: BottomCell,
    pub opts: ReconOptions,
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.gen_range(lo..hi))
}

fn wet_or_dry(rng: &mut impl Rng, p_dry: f64, lo: f64, hi: f64) -> f64 {
    if rng.gen_bool(p_dry) {
        0.0
    } else {
        log_uniform(rng, lo, hi)
    }
}

fn with_velocity(rng: &mut impl Rng, h: f64) -> ConservedPair {
    let v = rng.gen_range(-3.0..3.0);
    ConservedPair::new(h, if h > 0.0 { h * v } else { 0.0 }).unwrap()
}

/// Random cell data spanning all reconstruction cases: heights over several
/// decades, dry end points, arbitrary velocities and parabolic bottoms.
pub fn random_recon_input(rng: &mut impl Rng) -> ReconInput {
    let consts = Constants::default();
    let hbar = loop {
        let h = log_uniform(rng, -6.0, 0.5);
        if h >= consts.dry_avg_tol {
            break h;
        }
    };
    let hl = wet_or_dry(rng, 0.2, -5.0, 0.7);
    let hr = wet_or_dry(rng, 0.2, -5.0, 0.7);
    let dx = log_uniform(rng, -3.0, 1.0);
    let bottom = BottomCell::from_samples(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), dx);
    let opts = ReconOptions { limiting: rng.gen_bool(0.7), positivity: rng.gen_bool(0.85) };
    ReconInput { avg: with_velocity(rng, hbar), left: with_velocity(rng, hl), right: with_velocity(rng, hr), bottom, opts }
}

impl ReconInput {
    pub fn build(&self) -> CellReconstruction {
        build_cell_reconstruction(self.avg, self.left, self.right, self.bottom, &Constants::default(), self.opts)
    }

    /// Deviation of the reconstructed cell means from the given averages,
    /// relative to the magnitude of the cell data.
    pub fn conservation_error(&self) -> (f64, f64) {
        let rec = self.build();
        let dx = rec.dx();
        let scale_h = self.avg.h().max(self.left.h()).max(self.right.h());
        let scale_m = self.avg.m().abs().max(self.left.m().abs()).max(self.right.m().abs()).max(1e-300);
        let ih = integrate_cell(&rec, |x| rec.eval_h(x), 1e-13 * scale_h * dx) / dx;
        let im = integrate_cell(&rec, |x| rec.eval_m(x), 1e-13 * scale_m * dx) / dx;
        ((ih - self.avg.h()).abs() / scale_h, (im - self.avg.m()).abs() / scale_m)
    }
}

/// Minimum over `[0, 1]` of the parabola with end values `hl`, `hr` and mean
/// `hbar`, found by dense sampling followed by golden-section refinement.
pub fn parabola_min_sampled(hbar: f64, hl: f64, hr: f64) -> f64 {
    let p = |s: f64| hl + (hr - hl) * s + 6.0 * (hbar - 0.5 * (hl + hr)) * s * (1.0 - s);
    const N: usize = 4000;
    let (mut k_best, mut v_best) = (0, f64::INFINITY);
    for k in 0..=N {
        let v = p(k as f64 / N as f64);
        if v < v_best {
            k_best = k;
            v_best = v;
        }
    }
    let mut a = k_best.saturating_sub(1) as f64 / N as f64;
    let mut b = (k_best + 1).min(N) as f64 / N as f64;
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if p(c) < p(d) {
            b = d;
        } else {
            a = c;
        }
    }
    v_best.min(p(0.5 * (a + b)))
}

/// Momentum source of a fully wet cell at rest with level `level`:
/// `-(g/dx) ∫ (level - b) b' dx`, integrated in closed form.
pub fn lake_source_closed_form(level: f64, b_left: f64, b_right: f64, dx: f64, g: f64) -> f64 {
    -g * (level - 0.5 * (b_left + b_right)) * (b_right - b_left) / dx
}

/// A fully wet lake at rest on one cell.
#[derive(Debug, Clone, Copy)]
pub struct LakeCell {
    pub level: f64,
    pub bottom: BottomCell,
}

pub fn random_lake_cell(rng: &mut impl Rng) -> LakeCell {
    let dx = log_uniform(rng, -3.0, 1.0);
    let bottom = BottomCell::from_samples(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), dx);
    let level = bottom.max_in_cell() + log_uniform(rng, -3.0, 0.5);
    LakeCell { level, bottom }
}

impl LakeCell {
    /// Solver source and closed form, plus the magnitude used to make the
    /// difference relative.
    pub fn sources(&self, g: f64) -> (f64, f64, f64) {
        let b = self.bottom;
        let at = |bv: f64| ConservedPair::new(self.level - bv, 0.0).unwrap();
        let (left, right) = (at(b.left), at(b.right));
        let avg = at(b.average());
        let rec = build_cell_reconstruction(avg, left, right, b, &Constants::default().with_g(g), ReconOptions::default());
        let ends = [left, right];
        let solver = cell_source(&rec, &source_inputs(&rec, ends, ends, ends), g);
        let exact = lake_source_closed_form(self.level, b.left, b.right, b.dx, g);
        let h_max = self.level - b.left.min(b.right).min(b.center);
        let slope = ((b.right - b.left).abs() + (b.left - 2.0 * b.center + b.right).abs()) / b.dx;
        (solver, exact, g * h_max * slope)
    }
}

/// Randomized draining problem: cell heights, interface fluxes and a step.
#[derive(Debug, Clone)]
pub struct DrainProblem {
    pub avg_h: Vec<f64>,
    pub fluxes: Vec<InterfaceFlux>,
    pub dt: f64,
    pub dx: f64,
    pub periodic: bool,
}

pub fn random_drain_problem(rng: &mut impl Rng, n: usize) -> DrainProblem {
    let avg_h: Vec<f64> = (0..n).map(|_| wet_or_dry(rng, 0.3, -8.0, 0.0)).collect();
    let mut fluxes: Vec<InterfaceFlux> = (0..=n)
        .map(|_| InterfaceFlux {
            fh: rng.gen_range(-1.0..1.0) * log_uniform(rng, -4.0, 0.0),
            fm: rng.gen_range(-1.0..1.0),
            drain_scale: 1.0,
        })
        .collect();
    let periodic = rng.gen_bool(0.5);
    if periodic {
        fluxes[n] = fluxes[0];
    }
    DrainProblem { avg_h, fluxes, dt: log_uniform(rng, -3.0, -1.0), dx: 0.1, periodic }
}

impl DrainProblem {
    /// Runs the draining loop and checks its result, returning the number of
    /// reductions performed.
    pub fn check(&self) -> Result<usize, String> {
        let n = self.avg_h.len();
        let mut after = self.fluxes.clone();
        let outcome = draining_fixpoint(&self.avg_h, &mut after, self.dt, self.dx, self.periodic);
        if outcome.hit_cap {
            return Err("iteration cap reached".into());
        }
        let right = |i: usize| if self.periodic && i + 1 == n { 0 } else { i + 1 };
        let mut mass_before = 0.0;
        let mut mass_after = 0.0;
        for i in 0..n {
            let trial = self.avg_h[i] - self.dt * (after[right(i)].fh - after[i].fh) / self.dx;
            if trial < -1e-14 {
                return Err(format!("cell {i}: trial average {trial:e}"));
            }
            mass_before += self.avg_h[i] * self.dx;
            mass_after += trial * self.dx;
        }
        for (j, (a, b)) in self.fluxes.iter().zip(&after).enumerate() {
            let s = b.drain_scale;
            if !(0.0..=1.0).contains(&s) || (b.fh - s * a.fh).abs() > 1e-15 * a.fh.abs() || (b.fm - s * a.fm).abs() > 1e-15 * a.fm.abs() {
                return Err(format!("interface {j}: flux {a:?} became {b:?}"));
            }
        }
        let boundary = if self.periodic { 0.0 } else { self.dt * (after[n].fh - after[0].fh) };
        let scale = mass_before.abs() + self.dt * after.iter().map(|f| f.fh.abs()).sum::<f64>();
        if (mass_after - (mass_before - boundary)).abs() > 1e-13 * scale {
            return Err(format!("mass {mass_before:e} -> {mass_after:e}, boundary flux {boundary:e}"));
        }
        Ok(outcome.n_drained)
    }
}

/// Method-of-lines reference for smooth flows: fourth-order central flux
/// differences and the classical Runge-Kutta method on a fine uniform grid.
/// The two outermost nodes on either side keep their initial values.
pub struct MolReference {
    pub x: Vec<f64>,
    pub u: Vec<[f64; 2]>,
    pub g: f64,
    db: Vec<f64>,
}

impl MolReference {
    pub fn new(a: f64, b: f64, n: usize, g: f64, h0: impl Fn(f64) -> f64, m0: impl Fn(f64) -> f64, db: impl Fn(f64) -> f64) -> Self {
        let dx = (b - a) / n as f64;
        let x: Vec<f64> = (0..=n).map(|i| a + i as f64 * dx).collect();
        let u = x.iter().map(|&x| [h0(x), m0(x)]).collect();
        let db = x.iter().map(|&x| db(x)).collect();
        MolReference { x, u, g, db }
    }

    fn rhs(&self, u: &[[f64; 2]]) -> Vec<[f64; 2]> {
        let g = self.g;
        let dx = self.x[1] - self.x[0];
        let f: Vec<[f64; 2]> = u.iter().map(|q| [q[1], q[1] * q[1] / q[0] + 0.5 * g * q[0] * q[0]]).collect();
        let mut r = vec![[0.0; 2]; u.len()];
        for i in 2..u.len() - 2 {
            for k in 0..2 {
                r[i][k] = -(f[i - 2][k] - 8.0 * f[i - 1][k] + 8.0 * f[i + 1][k] - f[i + 2][k]) / (12.0 * dx);
            }
            r[i][1] -= g * u[i][0] * self.db[i];
        }
        r
    }

    /// Advances by `span` in `substeps` equal steps.
    pub fn advance(&mut self, span: f64, substeps: usize) {
        let dt = span / substeps as f64;
        let add = |u: &[[f64; 2]], k: &[[f64; 2]], a: f64| -> Vec<[f64; 2]> {
            u.iter().zip(k).map(|(q, d)| [q[0] + a * d[0], q[1] + a * d[1]]).collect()
        };
        for _ in 0..substeps {
            let k1 = self.rhs(&self.u);
            let k2 = self.rhs(&add(&self.u, &k1, 0.5 * dt));
            let k3 = self.rhs(&add(&self.u, &k2, 0.5 * dt));
            let k4 = self.rhs(&add(&self.u, &k3, dt));
            for i in 0..self.u.len() {
                for k in 0..2 {
                    self.u[i][k] += dt / 6.0 * (k1[i][k] + 2.0 * k2[i][k] + 2.0 * k3[i][k] + k4[i][k]);
                }
            }
        }
    }

    /// State at the node nearest to `x`.
    pub fn at(&self, x: f64) -> [f64; 2] {
        let dx = self.x[1] - self.x[0];
        self.u[((x - self.x[0]) / dx).round() as usize]
    }
}

/// Total variation of the point values of `h` and of the level `h + b`.
pub fn total_variation(sim: &Simulation) -> (f64, f64) {
    let p = &sim.state().pts;
    let level: Vec<f64> = p.iter().enumerate().map(|(j, q)| q.h() + sim.bottom().interface_value(j as isize)).collect();
    let tv_h = p.windows(2).map(|w| (w[1].h() - w[0].h()).abs()).sum();
    let tv_l = level.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    (tv_h, tv_l)
}

/// Outer interfaces of the connected wet region around the deepest cell.
pub fn wet_extent(sim: &Simulation) -> (f64, f64) {
    let g = sim.grid();
    let a = &sim.state().avg;
    let deep = (0..g.n_cells).max_by(|&i, &j| a[i].h().total_cmp(&a[j].h())).unwrap();
    let mut l = deep;
    while l > 0 && a[l - 1].h() > 0.0 {
        l -= 1;
    }
    let mut r = deep;
    while r + 1 < g.n_cells && a[r + 1].h() > 0.0 {
        r += 1;
    }
    (g.interface(l as isize), g.interface(r as isize + 1))
}

/// Least-squares slope of `-log2(err)` against `log2(cells)`.
pub fn fitted_order(cells: &[usize], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = cells.iter().map(|&n| (n as f64).log2()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| -e.log2()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
