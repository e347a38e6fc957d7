//! Monotonicity and consistency of the closed-form bounds.

use potlab_core::{
    bounds_with_h, homogeneous_sublinear_bound, lower_bound_general, lower_bound_power,
    upper_bound_general, upper_bound_power_negative, Nonlinearity,
};
use proptest::prelude::*;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * 1.0f64.max(a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lower_bounds_monotone_in_potential(
        q in prop_oneof![0.2f64..0.95, Just(1.0), 1.05f64..2.5],
        b in 1.0f64..4.0,
        pot in 0.0f64..1.5,
        delta in 0.0f64..0.5,
    ) {
        let lo = lower_bound_power(pot, b, q).unwrap();
        let hi = lower_bound_power(pot + delta, b, q).unwrap();
        if !lo.condition.violated() && !hi.condition.violated() {
            prop_assert!(hi.value >= lo.value - 1e-12 * (1.0 + lo.value.abs()));
        }
    }

    #[test]
    fn upper_bounds_monotone_in_potential(
        q in -2.5f64..-0.2,
        b in 1.0f64..4.0,
        pot in 0.0f64..0.4,
        delta in 0.0f64..0.2,
    ) {
        let at = upper_bound_power_negative(pot, b, q).unwrap();
        let further = upper_bound_power_negative(pot + delta, b, q).unwrap();
        if !at.condition.violated() && !further.condition.violated() {
            prop_assert!(further.value <= at.value + 1e-12);
        }
    }

    #[test]
    fn weaker_certificates_weaken_bounds(
        q in prop_oneof![0.3f64..0.95, Just(1.0), 1.1f64..2.0],
        pot in 0.0f64..0.8,
    ) {
        // Lower bounds shrink and upper bounds grow as b grows.
        let bs = [1.0, 1.5, 2.0, 4.0];
        let mut prev: Option<f64> = None;
        for &b in &bs {
            let pb = lower_bound_power(pot, b, q).unwrap();
            if pb.condition.violated() {
                continue;
            }
            if let Some(p) = prev {
                prop_assert!(pb.value <= p + 1e-12 * (1.0 + p.abs()));
            }
            prev = Some(pb.value);
        }

        let mut prev_upper: Option<f64> = None;
        for &b in &bs {
            let pb = upper_bound_power_negative(pot * 0.3, b, -1.0).unwrap();
            if pb.condition.violated() {
                continue;
            }
            if let Some(p) = prev_upper {
                prop_assert!(pb.value >= p - 1e-12);
            }
            prev_upper = Some(pb.value);
        }
    }

    #[test]
    fn power_and_general_routes_agree(
        q in prop_oneof![0.2f64..0.95, Just(1.0), 1.05f64..2.5],
        b in 1.0f64..4.0,
        pot in 0.0f64..1.2,
    ) {
        let g = Nonlinearity::power(q).unwrap();
        let a = lower_bound_power(pot, b, q).unwrap();
        let c = lower_bound_general(pot, b, &g).unwrap();
        prop_assert!(rel_close(a.value, c.value, 1e-12));
        prop_assert_eq!(a.condition.status, c.condition.status);
    }

    #[test]
    fn decreasing_power_and_general_routes_agree(
        q in -2.5f64..-0.2,
        b in 1.0f64..3.0,
        pot in 0.0f64..0.5,
    ) {
        let g = Nonlinearity::power(q).unwrap();
        let a = upper_bound_power_negative(pot, b, q).unwrap();
        let c = upper_bound_general(pot, b, &g).unwrap();
        prop_assert!(rel_close(a.value, c.value, 1e-12));
        prop_assert_eq!(a.condition.status, c.condition.status);
    }

    #[test]
    fn exponential_branch_is_the_q_limit(
        b in 1.0f64..3.0,
        pot in 0.0f64..1.5,
    ) {
        let exact = lower_bound_power(pot, b, 1.0).unwrap().value;
        for &q in &[1.0 - 1e-6, 1.0 + 1e-6] {
            let near = lower_bound_power(pot, b, q).unwrap().value;
            prop_assert!(rel_close(near, exact, 1e-4), "q={} {} vs {}", q, near, exact);
        }
    }

    #[test]
    fn h_weighting_is_exactly_the_scaled_bound(
        q in prop_oneof![0.3f64..0.95, Just(1.0), 1.1f64..2.2, -2.0f64..-0.3],
        b in 1.0f64..3.0,
        h in 0.2f64..5.0,
        pot in 0.0f64..1.0,
    ) {
        let scaled = bounds_with_h(pot, h, b, q).unwrap();
        let inner = if q > 0.0 {
            lower_bound_power(pot / h, b, q).unwrap()
        } else {
            upper_bound_power_negative(pot / h, b, q).unwrap()
        };
        if inner.value.is_finite() {
            prop_assert_eq!(scaled.value, h * inner.value);
        } else {
            prop_assert!(scaled.value.is_infinite());
        }
        prop_assert_eq!(scaled.condition.status, inner.condition.status);
    }

    #[test]
    fn homogeneous_bound_scales_in_potential_and_b(
        q in 0.1f64..0.9,
        b in 1.0f64..4.0,
        pot in 0.0f64..3.0,
    ) {
        let v = homogeneous_sublinear_bound(pot, b, q).unwrap();
        let v2 = homogeneous_sublinear_bound(2.0 * pot, b, q).unwrap();
        let factor = 2.0f64.powf(1.0 / (1.0 - q));
        prop_assert!(rel_close(v2, factor * v, 1e-10));
        // Weaker certificate, smaller lower bound.
        let weaker = homogeneous_sublinear_bound(pot, b * 1.5, q).unwrap();
        prop_assert!(weaker <= v + 1e-12);
    }
}
