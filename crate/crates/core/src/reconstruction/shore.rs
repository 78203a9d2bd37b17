//! Shore location inside a half-wet cell.
//!
//! The wet part of the cell has a linear surface, the other part a constant
//! height `h_near`. With `ξ` the width fraction of the wet part, conservation
//! reads
//!
//! ```text
//! G(ξ) = -(hbar - h_near) + (h_far - h_near) ξ / 2 + b2 dx² ξ³ / 6 = 0
//! ```
//!
//! where `b2` is the quadratic coefficient of the cell bottom.

use std::f64::consts::PI;

/// Residual of the shore equation.
#[inline]
pub fn shore_residual(xi: f64, hbar: f64, h_near: f64, h_far: f64, b2: f64, dx: f64) -> f64 {
    -(hbar - h_near) + 0.5 * (h_far - h_near) * xi + b2 * dx * dx * xi * xi * xi / 6.0
}

/// `ξ0` (location of the maximum of `G` for concave bottoms) and the
/// critical average above which no root exists.
pub fn critical_parameters(h_near: f64, h_far: f64, b2: f64, dx: f64) -> Option<(f64, f64)> {
    let d = h_far - h_near;
    if !(b2 < 0.0 && d > 0.0) {
        return None;
    }
    let curv = b2.abs() * dx * dx;
    let xi0 = (d / curv).sqrt();
    let h_crit = h_near + (d * d * d / (9.0 * curv)).sqrt();
    Some((xi0, h_crit))
}

/// Parameters `(ξ0, h_crit)` when the exceptional reconstruction is needed:
/// concave bottom, `hbar > h_crit` and `ξ0 < 1`.
pub fn exceptional_regime(hbar: f64, h_near: f64, h_far: f64, b2: f64, dx: f64) -> Option<(f64, f64)> {
    critical_parameters(h_near, h_far, b2, dx).filter(|&(xi0, h_crit)| hbar > h_crit && xi0 < 1.0)
}

/// Solves the shore cubic. Returns the relevant root if it lies in `(0, 1)`:
/// the unique real root for convex bottoms, the linear solution for a
/// straight bottom and the smallest positive root for concave bottoms.
/// `None` covers the exceptional concave regime and roots outside the cell.
pub fn solve_shore_cubic(hbar: f64, h_near: f64, h_far: f64, b2: f64, dx: f64) -> Option<f64> {
    let a = hbar - h_near;
    let d = h_far - h_near;
    if !(a > 0.0 && d > 0.0) || !b2.is_finite() {
        return None;
    }
    let c3 = b2 * dx * dx / 6.0;
    let g = |xi: f64| -a + 0.5 * d * xi + c3 * xi * xi * xi;
    let dg = |xi: f64| 0.5 * d + 3.0 * c3 * xi * xi;

    let (guess, lo, hi) = if c3 == 0.0 {
        let xi = 2.0 * a / d;
        return (xi > 0.0 && xi < 1.0).then_some(xi);
    } else if c3 > 0.0 {
        // single real root, hyperbolic form of Cardano's formula
        let s = (d / (6.0 * c3)).sqrt();
        let xi = 2.0 * s * ((3.0 * a / (d * s)).asinh() / 3.0).sinh();
        (xi, 0.0, 2.0 * a / d)
    } else {
        let xi0 = (d / (6.0 * c3.abs())).sqrt();
        if g(xi0) < 0.0 {
            return None;
        }
        // three real roots (Vieta's trigonometric form); this is the one in (0, ξ0]
        let arg = (-3.0 * a / (d * xi0)).clamp(-1.0, 1.0);
        let theta = arg.acos();
        let xi = 2.0 * xi0 * ((theta - 2.0 * PI) / 3.0).cos();
        (xi, 0.0, xi0)
    };

    let xi = polish_root(g, dg, guess, lo, hi);
    (xi > 0.0 && xi < 1.0).then_some(xi)
}

/// Safeguarded Newton iteration on a bracket with `g(lo) < 0 <= g(hi)`.
fn polish_root(g: impl Fn(f64) -> f64, dg: impl Fn(f64) -> f64, guess: f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut x = guess.clamp(lo, hi);
    for _ in 0..100 {
        let gx = g(x);
        if gx == 0.0 {
            return x;
        }
        if gx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let slope = dg(x);
        let mut next = x - gx / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if next == x || hi - lo <= f64::EPSILON * hi.abs() {
            return next;
        }
        x = next;
    }
    x
}
