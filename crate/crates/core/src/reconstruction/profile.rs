//! Single-interval reconstructions: the conservative parabola and the
//! power-law limited variant.

/// Membership in the set of data for which the power-law limiter is used.
/// All four clauses are strict inequalities.
pub fn in_limiter_set(qbar: f64, ql: f64, qr: f64) -> bool {
    (ql < qbar && qbar < ql + (qr - ql) / 3.0)
        || (qr - (qr - ql) / 3.0 < qbar && qbar < qr)
        || (qr < qbar && qbar < qr + (ql - qr) / 3.0)
        || (ql - (ql - qr) / 3.0 < qbar && qbar < ql)
}

/// Exponent `(qr - qbar) / (qbar - ql)` of the power law, if it lies in
/// `[1/e_max, e_max]`.
pub fn limited_exponent(qbar: f64, ql: f64, qr: f64, e_max: f64) -> Option<f64> {
    let denom = qbar - ql;
    if denom == 0.0 {
        return None;
    }
    let e = (qr - qbar) / denom;
    (e.is_finite() && e >= 1.0 / e_max && e <= e_max).then_some(e)
}

/// The unique parabola on `[xl, xr]` through `ql`, `qr` with mean `qbar`.
pub fn recon_parabolic(qbar: f64, ql: f64, qr: f64, xl: f64, xr: f64, x: f64) -> f64 {
    Profile::parabolic(qbar, ql, qr, xl, xr).eval(x)
}

/// Power law `ql + (qr - ql) s^E` where admissible, the parabola otherwise.
pub fn recon_limited(qbar: f64, ql: f64, qr: f64, xl: f64, xr: f64, x: f64, e_max: f64) -> f64 {
    match limited_exponent(qbar, ql, qr, e_max) {
        Some(e) => Profile::power_law(ql, qr, xl, xr, e).eval(x),
        None => recon_parabolic(qbar, ql, qr, xl, xr, x),
    }
}

/// Limited reconstruction inside the limiter set, parabolic elsewhere.
pub fn recon_dispatch(qbar: f64, ql: f64, qr: f64, xl: f64, xr: f64, x: f64, e_max: f64) -> f64 {
    Profile::new(qbar, ql, qr, xl, xr, e_max, true).eval(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// Coefficient `6 (qbar - (ql + qr) / 2)` of `s (1 - s)`.
    Parabolic(f64),
    PowerLaw(f64),
}

/// A precomputed single-interval reconstruction, cheap to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    ql: f64,
    qr: f64,
    xl: f64,
    xr: f64,
    shape: Shape,
}

impl Profile {
    pub fn new(qbar: f64, ql: f64, qr: f64, xl: f64, xr: f64, e_max: f64, limiting: bool) -> Self {
        if limiting && in_limiter_set(qbar, ql, qr) {
            if let Some(e) = limited_exponent(qbar, ql, qr, e_max) {
                return Self::power_law(ql, qr, xl, xr, e);
            }
        }
        Self::parabolic(qbar, ql, qr, xl, xr)
    }

    pub fn parabolic(qbar: f64, ql: f64, qr: f64, xl: f64, xr: f64) -> Self {
        debug_assert!(xr > xl);
        Profile {
            ql,
            qr,
            xl,
            xr,
            shape: Shape::Parabolic(6.0 * (qbar - 0.5 * (ql + qr))),
        }
    }

    pub fn power_law(ql: f64, qr: f64, xl: f64, xr: f64, exponent: f64) -> Self {
        debug_assert!(xr > xl);
        Profile { ql, qr, xl, xr, shape: Shape::PowerLaw(exponent) }
    }

    pub fn is_limited(&self) -> bool {
        matches!(self.shape, Shape::PowerLaw(_))
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        if x == self.xr {
            return self.qr;
        }
        let s = (x - self.xl) / (self.xr - self.xl);
        match self.shape {
            Shape::Parabolic(k) => self.ql + (self.qr - self.ql) * s + k * s * (1.0 - s),
            Shape::PowerLaw(e) => self.ql + (self.qr - self.ql) * s.abs().powf(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_data_is_reproduced_exactly() {
        for &x in &[-0.5, -0.1, 0.0, 0.3, 0.5] {
            assert_eq!(recon_parabolic(1.0, 1.0, 1.0, -0.5, 0.5, x), 1.0);
            assert_eq!(recon_dispatch(0.33, 0.33, 0.33, -0.5, 0.5, x, 50.0), 0.33);
        }
    }

    #[test]
    fn odd_data_gives_linear_profile() {
        for k in 0..=10 {
            let x = -0.5 + 0.1 * k as f64;
            assert!((recon_parabolic(0.0, -1.0, 1.0, -0.5, 0.5, x) - 2.0 * x).abs() < 1e-15);
        }
    }

    #[test]
    fn limiter_set_clauses() {
        assert!(in_limiter_set(0.1, 0.0, 1.0));
        assert!(in_limiter_set(0.9, 0.0, 1.0));
        assert!(in_limiter_set(0.9, 1.0, 0.0));
        assert!(!in_limiter_set(0.5, 0.0, 1.0));
        assert!(!in_limiter_set(0.7, 0.7, 0.7));
    }

    #[test]
    fn power_law_with_exponent_nine() {
        assert!((limited_exponent(0.1, 0.0, 1.0, 50.0).unwrap() - 9.0).abs() < 1e-12);
        for k in 0..=10 {
            let x = 0.1 * k as f64;
            let v = recon_limited(0.1, 0.0, 1.0, 0.0, 1.0, x, 50.0);
            assert!((v - x.powf(9.0)).abs() < 1e-13, "{x}: {v}");
        }
    }

    #[test]
    fn inadmissible_exponent_falls_back_to_parabola() {
        // exponent 99 exceeds e_max = 50
        assert_eq!(limited_exponent(0.01, 0.0, 1.0, 50.0), None);
        let x = 0.37;
        assert_eq!(
            recon_limited(0.01, 0.0, 1.0, 0.0, 1.0, x, 50.0),
            recon_parabolic(0.01, 0.0, 1.0, 0.0, 1.0, x)
        );
        assert_eq!(limited_exponent(0.0, 0.0, 1.0, 50.0), None);
    }

    #[test]
    fn dispatch_branches() {
        assert!(!Profile::new(0.5, 0.0, 1.0, -0.5, 0.5, 50.0, true).is_limited());
        assert!(Profile::new(0.1, 0.0, 1.0, -0.5, 0.5, 50.0, true).is_limited());
        assert!(!Profile::new(0.1, 0.0, 1.0, -0.5, 0.5, 50.0, false).is_limited());
        // linear data stays linear
        assert!((recon_dispatch(0.5, 0.0, 1.0, -0.5, 0.5, 0.25, 50.0) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn endpoints_are_exact() {
        let p = Profile::new(0.2, 0.13, 0.91, -0.05, 0.05, 50.0, true);
        assert_eq!(p.eval(-0.05), 0.13);
        assert_eq!(p.eval(0.05), 0.91);
    }
}
