//! Error norms and observed orders for convergence studies.

use crate::error::{Result, SweError};
use crate::grid::Grid;
use crate::state::SolutionState;

/// Distinct point values of a state: the duplicated last point of a periodic
/// grid is dropped.
fn distinct_points(grid: &Grid) -> usize {
    if grid.boundary == crate::grid::BoundaryKind::Periodic {
        grid.n_cells
    } else {
        grid.n_points()
    }
}

/// L1 error of the point values against another state on the same grid,
/// as `dx · Σ |q - q_ref|` for `h` and `m`.
pub fn l1_error(state: &SolutionState, reference: &SolutionState, grid: &Grid) -> Result<(f64, f64)> {
    if state.pts.len() != reference.pts.len() || state.pts.len() != grid.n_points() {
        return Err(SweError::GridMismatch(format!(
            "{} points against {} reference points on a grid with {} points",
            state.pts.len(),
            reference.pts.len(),
            grid.n_points()
        )));
    }
    let n = distinct_points(grid);
    let (mut eh, mut em) = (0.0, 0.0);
    for (a, b) in state.pts[..n].iter().zip(&reference.pts[..n]) {
        eh += (a.h() - b.h()).abs();
        em += (a.m() - b.m()).abs();
    }
    Ok((eh * grid.dx, em * grid.dx))
}

/// L1 error of the point values against an exact solution `f(x) -> (h, m)`.
pub fn l1_error_exact(state: &SolutionState, grid: &Grid, f: impl Fn(f64) -> (f64, f64)) -> Result<(f64, f64)> {
    if state.pts.len() != grid.n_points() {
        return Err(SweError::GridMismatch(format!(
            "{} points on a grid with {} points",
            state.pts.len(),
            grid.n_points()
        )));
    }
    let n = distinct_points(grid);
    let (mut eh, mut em) = (0.0, 0.0);
    for (j, p) in state.pts[..n].iter().enumerate() {
        let (h, m) = f(grid.interface(j as isize));
        eh += (p.h() - h).abs();
        em += (p.m() - m).abs();
    }
    Ok((eh * grid.dx, em * grid.dx))
}

/// Samples the point values of a finer solution at the points of a coarse
/// grid. The fine cell count must be a multiple of the coarse one.
pub fn restrict_points(fine: &SolutionState, fine_grid: &Grid, coarse_grid: &Grid) -> Result<SolutionState> {
    let (nf, nc) = (fine_grid.n_cells, coarse_grid.n_cells);
    let same_domain = (fine_grid.x_min - coarse_grid.x_min).abs() <= 1e-12 * coarse_grid.length()
        && (fine_grid.x_max - coarse_grid.x_max).abs() <= 1e-12 * coarse_grid.length();
    if nc == 0 || nf % nc != 0 || !same_domain || fine.pts.len() != fine_grid.n_points() {
        return Err(SweError::GridMismatch(format!(
            "cannot restrict {nf} cells on [{}, {}] to {nc} cells on [{}, {}]",
            fine_grid.x_min, fine_grid.x_max, coarse_grid.x_min, coarse_grid.x_max
        )));
    }
    let r = nf / nc;
    let pts = (0..=nc).map(|j| fine.pts[j * r]).collect();
    let avg = (0..nc)
        .map(|i| {
            let (h, m) = fine.avg[i * r..(i + 1) * r]
                .iter()
                .fold((0.0, 0.0), |(h, m), q| (h + q.h(), m + q.m()));
            crate::state::ConservedPair::clamped(h / r as f64, m / r as f64)
        })
        .collect();
    Ok(SolutionState { avg, pts, frozen: vec![None; nc + 1], t: fine.t })
}

/// Observed order between two grids differing by `ratio` in resolution.
pub fn convergence_order(err_coarse: f64, err_fine: f64, ratio: f64) -> f64 {
    (err_coarse / err_fine).ln() / ratio.ln()
}
