//! Invariants of the scalar nonlinearity calculus.

use potlab_core::{iteration_constant_c, Nonlinearity};
use proptest::prelude::*;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1.0f64.max(a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn f_inverse_inverts_f_for_powers(
        q in prop_oneof![0.05f64..0.95, 1.05f64..3.0, Just(1.0)],
        t in 1.0f64..6.0,
    ) {
        let g = Nonlinearity::power(q).unwrap();
        let tau = g.f_increasing(t).unwrap();
        let back = g.f_inverse(tau).unwrap();
        prop_assert!(rel_close(back, t, 1e-9), "q={} t={} back={}", q, t, back);
    }

    #[test]
    fn f_inverse_inverts_f_for_decreasing_powers(
        q in -3.0f64..-0.1,
        t in 0.01f64..1.0,
    ) {
        let g = Nonlinearity::power(q).unwrap();
        let tau = g.f_decreasing(t).unwrap();
        let back = g.f_inverse(tau).unwrap();
        prop_assert!(rel_close(back, t, 1e-9));
    }

    #[test]
    fn ladder_is_monotone_in_level(
        q in prop_oneof![0.3f64..0.9, 1.0f64..2.0],
        b in 1.0f64..2.5,
        t_max in 0.2f64..2.0,
    ) {
        let g = Nonlinearity::power(q).unwrap();
        let ladder = g.psi_ladder(b, 5, t_max, 513).unwrap();
        for k in 1..ladder.num_levels() {
            let cur = ladder.level(k);
            let prev = ladder.level(k - 1);
            for i in 0..cur.len() {
                prop_assert!(cur[i] >= prev[i]);
            }
        }
    }

    #[test]
    fn iteration_constant_monotone_in_k_for_superunit_q(
        q in 1.0f64..2.5,
        k in 0u32..12,
    ) {
        let lo = iteration_constant_c(q, k).unwrap().value;
        let hi = iteration_constant_c(q, k + 1).unwrap().value;
        prop_assert!(hi >= lo);
    }

    #[test]
    fn iteration_constant_bounded_for_subunit_q(
        q in 0.05f64..0.95,
        k in 0u32..40,
    ) {
        let cap = (1.0 - q).powf(-1.0 / (1.0 - q));
        let c = iteration_constant_c(q, k).unwrap();
        prop_assert!(!c.overflow);
        prop_assert!(
            c.value <= cap * (1.0 + 1e-12),
            "q={} k={} c={} cap={}", q, k, c.value, cap
        );
    }
}

proptest! {
    // The integrated route runs a long fixed-step integration per call;
    // keep these case counts modest.
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ladder_is_dominated_by_its_limit(
        q in prop_oneof![0.4f64..0.9, 1.0f64..1.8],
        b in 1.0f64..2.0,
    ) {
        let g = Nonlinearity::power(q).unwrap();
        // Stay safely inside the admissible range of the limit, and below
        // the region where the limit overflows f64.
        let a = g.f_increasing_limit().unwrap();
        let t_max = if a.is_finite() { 0.8 * b * a } else { 2.0 };
        let t_max = t_max.min(b * g.f_increasing(1e6).unwrap());
        let grid_size = 2049usize;
        let ladder = g.psi_ladder(b, 6, t_max, grid_size).unwrap();
        let step = ladder.grid()[1] - ladder.grid()[0];
        // The tabulation overestimates convex integrands by O(step^2);
        // domination holds up to that quadrature excess.
        let slack = 50.0 * step * step;
        for (i, &t) in ladder.grid().iter().enumerate().step_by(256) {
            let limit = g.psi_infinity(b, t).unwrap();
            for k in 0..ladder.num_levels() {
                if i >= ladder.level(k).len() {
                    break;
                }
                prop_assert!(
                    ladder.level(k)[i] <= limit + slack * (1.0 + limit),
                    "k={} t={}", k, t
                );
            }
        }
    }

    #[test]
    fn psi_infinity_routes_agree(
        q in prop_oneof![0.3f64..0.9, 1.0f64..2.0],
        b in 1.0f64..2.0,
        frac in 0.05f64..0.9,
    ) {
        let g = Nonlinearity::power(q).unwrap();
        let a = g.f_increasing_limit().unwrap();
        let t = if a.is_finite() { frac * b * a } else { frac * 4.0 };
        let t = t.min(b * g.f_increasing(1e9).unwrap());
        let routes = g.psi_infinity_routes(b, t).unwrap();
        prop_assert!(rel_close(routes.closed_form, routes.integrated, 1e-8));
    }
}

#[test]
fn f_inverse_inverts_f_for_general_tabulations() {
    // A dense tabulation of g(t) = 1 + (t - 1)^2 on [1, 9].
    let nodes: Vec<f64> = (0..4097).map(|i| 1.0 + 8.0 * i as f64 / 4096.0).collect();
    let values: Vec<f64> = nodes.iter().map(|t| 1.0 + (t - 1.0) * (t - 1.0)).collect();
    let g = Nonlinearity::general_increasing(nodes, values).unwrap();
    for &t in &[1.0, 1.3, 2.0, 4.5, 8.0] {
        let tau = g.f_increasing(t).unwrap();
        let back = g.f_inverse(tau).unwrap();
        assert!((back - t).abs() <= 1e-9 * t.max(1.0), "t={t} back={back}");
    }

    let nodes: Vec<f64> = (0..2049).map(|i| i as f64 / 2048.0).collect();
    let values: Vec<f64> = nodes.iter().map(|t| 3.0 - 2.0 * t).collect();
    let g = Nonlinearity::general_decreasing(nodes, values).unwrap();
    for &t in &[0.0, 0.2, 0.6, 1.0] {
        let tau = g.f_decreasing(t).unwrap();
        let back = g.f_inverse(tau).unwrap();
        assert!((back - t).abs() <= 1e-9, "t={t} back={back}");
    }
}
