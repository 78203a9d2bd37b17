//! Characteristic variables of the shallow water system and the dry-state
//! regularizations that keep every transform total.

use crate::state::{ConservedPair, DRY_AVG_TOL};

/// `Q± = 2c ± v` with `c = sqrt(g h)`; both vanish for `h <= 0`.
#[inline]
pub fn to_char(q: ConservedPair, g: f64) -> (f64, f64) {
    if q.h() <= 0.0 {
        return (0.0, 0.0);
    }
    let c = (g * q.h()).sqrt();
    let v = q.m() / q.h();
    (2.0 * c + v, 2.0 * c - v)
}

/// Inverse of [`to_char`]. A non-positive `Q+ + Q-` yields the dry state.
#[inline]
pub fn from_char(q_plus: f64, q_minus: f64, g: f64) -> ConservedPair {
    let sum = q_plus + q_minus;
    if !(sum > 0.0) {
        return ConservedPair::DRY;
    }
    let c = 0.25 * sum;
    let v = 0.5 * (q_plus - q_minus);
    let h = c * c / g;
    ConservedPair::clamped(h, h * v)
}

/// Characteristic speeds `(λ+, λ-) = (v + c, v - c)` of a characteristic
/// state. States with `h < 1e-14` have zero speeds.
#[inline]
pub fn char_speeds(q_plus: f64, q_minus: f64, g: f64) -> (f64, f64) {
    let sum = q_plus + q_minus;
    if !(sum > 0.0) {
        return (0.0, 0.0);
    }
    let c = 0.25 * sum;
    if c * c / g < DRY_AVG_TOL {
        return (0.0, 0.0);
    }
    let v = 0.5 * (q_plus - q_minus);
    (v + c, v - c)
}

/// Speeds of a conserved state, same regularization as [`char_speeds`].
#[inline]
pub fn speeds(q: ConservedPair, g: f64) -> (f64, f64) {
    if q.h() < DRY_AVG_TOL {
        return (0.0, 0.0);
    }
    let c = (g * q.h()).sqrt();
    let v = q.m() / q.h();
    (v + c, v - c)
}

/// Largest characteristic speed magnitude `|v| + c`.
#[inline]
pub fn max_speed(q: ConservedPair, g: f64) -> f64 {
    let (lp, lm) = speeds(q, g);
    lp.abs().max(lm.abs())
}

/// Physical flux `(m, m²/h + g h²/2)`, zero for dry states.
#[inline]
pub fn physical_flux(q: ConservedPair, g: f64) -> (f64, f64) {
    if q.h() <= 0.0 {
        return (0.0, 0.0);
    }
    let h = q.h();
    let m = q.m();
    (m, m * m / h + 0.5 * g * h * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: f64 = 9.812;

    #[test]
    fn resting_water_has_symmetric_invariants() {
        let (qp, qm) = to_char(ConservedPair::new(1.0, 0.0).unwrap(), G);
        let expected = 2.0 * G.sqrt();
        assert!((qp - expected).abs() < 1e-14);
        assert_eq!(qp, qm);
        assert!((expected - 6.2648224).abs() < 1e-6);
    }

    #[test]
    fn dry_state_is_regularized() {
        assert_eq!(to_char(ConservedPair::DRY, G), (0.0, 0.0));
        assert_eq!(from_char(0.0, 0.0, G), ConservedPair::DRY);
        assert_eq!(from_char(-1.0, 0.5, G), ConservedPair::DRY);
        assert_eq!(speeds(ConservedPair::DRY, G), (0.0, 0.0));
        assert_eq!(physical_flux(ConservedPair::DRY, G), (0.0, 0.0));
    }

    #[test]
    fn tiny_heights_have_zero_speed() {
        let q = ConservedPair::new(1e-15, 1e-16).unwrap();
        assert_eq!(speeds(q, G), (0.0, 0.0));
        let (qp, qm) = to_char(q, G);
        assert_eq!(char_speeds(qp, qm, G), (0.0, 0.0));
    }

    #[test]
    fn flux_values() {
        let (fh, fm) = physical_flux(ConservedPair::new(2.0, 4.0).unwrap(), G);
        assert_eq!(fh, 4.0);
        assert!((fm - 27.624).abs() < 1e-12);
        let (fh, fm) = physical_flux(ConservedPair::new(1.0, 0.0).unwrap(), G);
        assert_eq!((fh, fm), (0.0, G / 2.0));
    }

    #[test]
    fn speeds_match_char_speeds() {
        let q = ConservedPair::new(0.7, -0.3).unwrap();
        let (qp, qm) = to_char(q, G);
        let (a, b) = speeds(q, G);
        let (c, d) = char_speeds(qp, qm, G);
        assert!((a - c).abs() < 1e-14 && (b - d).abs() < 1e-14);
        assert!(((a - b) - 2.0 * (G * 0.7f64).sqrt()).abs() < 1e-14);
    }
}
