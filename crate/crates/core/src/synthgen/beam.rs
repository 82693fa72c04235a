//! Analytic cantilever deflection under a transverse point load.
//!
//! The beam is clamped at arc 0. A transverse force of magnitude `f` applied
//! at arc `s_c` deflects the centreline by
//!   w(s) = f s² (3 s_c − s) / (6 EI)        for s ≤ s_c,
//! and beyond the load point the material carries on rigidly along the
//! tangent:
//!   w(s) = f s_c² (3 s − s_c) / (6 EI)      for s > s_c,
//! which equals w(s_c) + w'(s_c)(s − s_c). Displacements are first-order:
//! points move only in the transverse direction, with no axial foreshortening.

/// Deflection magnitude at arc `s` for transverse force magnitude `f`.
pub fn deflection(s: f64, s_c: f64, f: f64, ei: f64) -> f64 {
    debug_assert!(ei > 0.0, "stiffness must be positive");
    debug_assert!(s_c > 0.0, "load arc must be positive");
    let s = s.max(0.0);
    if s <= s_c {
        f * s * s * (3.0 * s_c - s) / (6.0 * ei)
    } else {
        f * s_c * s_c * (3.0 * s - s_c) / (6.0 * ei)
    }
}

/// Deflection at the load point: f s_c³ / (3 EI).
pub fn tip_deflection(s_c: f64, f: f64, ei: f64) -> f64 {
    f * s_c.powi(3) / (3.0 * ei)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_at_clamped_base() {
        assert_eq!(deflection(0.0, 1.0, 0.7, 2.0), 0.0);
    }

    #[test]
    fn matches_tip_formula_at_load_point() {
        let (s_c, f, ei) = (1.3, 0.8, 2.1);
        let w = deflection(s_c, s_c, f, ei);
        // f s_c²(3 s_c − s_c)/(6 EI) = f s_c³/(3 EI)
        assert!((w - tip_deflection(s_c, f, ei)).abs() < 1e-15);
        assert!((w - f * s_c * s_c * s_c / (3.0 * ei)).abs() < 1e-15);
    }

    #[test]
    fn continuous_across_the_load_point() {
        let (s_c, f, ei) = (0.9, 0.5, 1.7);
        let below = deflection(s_c - 1e-9, s_c, f, ei);
        let above = deflection(s_c + 1e-9, s_c, f, ei);
        assert!((below - above).abs() < 1e-8);
    }

    #[test]
    fn linear_in_force() {
        let (s_c, ei) = (1.1, 2.4);
        for s in [0.2, 0.8, 1.1, 1.5] {
            let w1 = deflection(s, s_c, 0.37, ei);
            let w2 = deflection(s, s_c, 0.74, ei);
            assert!((w2 - 2.0 * w1).abs() <= 1e-15 * w2.abs().max(1.0));
        }
    }

    proptest! {
        /// w is non-decreasing in s on [0, s_c] (and in fact beyond).
        #[test]
        fn monotone_in_arc(
            s_c in 0.1..2.0f64,
            f in 0.0..1.0f64,
            ei in 0.5..5.0f64,
        ) {
            let mut prev = 0.0;
            for i in 0..=200 {
                let s = s_c * i as f64 / 200.0;
                let w = deflection(s, s_c, f, ei);
                prop_assert!(w + 1e-15 >= prev, "w({s}) = {w} < {prev}");
                prev = w;
            }
        }
    }
}
