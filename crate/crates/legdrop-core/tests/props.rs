//! Property tests for the geometric and energetic invariants.

use proptest::prelude::*;

use legdrop_core::dynamics::{damper_torque, leg_force};
use legdrop_core::energy::{decompose_energy, full_rejection, loop_area, WorkLoop};
use legdrop_core::expdata::{moving_average, TimeSeries};
use legdrop_core::geometry::{beta_from_length, leg_length, length_jacobian};
use legdrop_core::params::{DamperSpec, LegParams};

fn params() -> LegParams {
    LegParams::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn angle_length_round_trip(beta in 0.2f64..3.0) {
        let p = params();
        let l = leg_length(beta, &p).unwrap();
        let back = beta_from_length(l, &p).unwrap();
        prop_assert!((back - beta).abs() < 1e-10, "beta {beta} -> {back}");
    }

    #[test]
    fn round_trip_holds_for_asymmetric_segments(
        beta in 0.2f64..3.0,
        lambda1 in 0.05f64..0.4,
        lambda2 in 0.05f64..0.4,
    ) {
        let p = LegParams { lambda1, lambda2, ..params() };
        let l = leg_length(beta, &p).unwrap();
        let back = beta_from_length(l, &p).unwrap();
        prop_assert!((back - beta).abs() < 1e-9, "beta {beta} -> {back}");
    }

    #[test]
    fn leg_length_increases_with_knee_angle(
        beta in 0.2f64..2.9,
        gap in 0.01f64..0.1,
    ) {
        let p = params();
        let shorter = leg_length(beta, &p).unwrap();
        let longer = leg_length(beta + gap, &p).unwrap();
        prop_assert!(longer > shorter);
    }

    #[test]
    fn leg_force_is_virtual_work(beta in 0.3f64..1.9, tau in -2.0f64..2.0) {
        // On constraint-consistent states the force law must equal
        // tau / (dl/dbeta) to high relative accuracy.
        let p = params();
        let y = leg_length(beta, &p).unwrap();
        let f_law = leg_force(y, beta, tau, &p).unwrap();
        let f_vw = tau / length_jacobian(beta, &p).unwrap();
        let scale = f_vw.abs().max(1e-9);
        prop_assert!(((f_law - f_vw) / scale).abs() < 1e-9);
    }
}

proptest! {
    #[test]
    fn damper_never_injects_energy(
        betadot in -50.0f64..50.0,
        d_v in 0.0f64..500.0,
        d_c in 0.0f64..100.0,
    ) {
        let spec = DamperSpec { viscous: d_v, coulomb: d_c, deadband: 1e-6 };
        let tau = damper_torque(betadot, &spec, &params());
        prop_assert!(tau * betadot <= 0.0, "tau {tau} at betadot {betadot}");
    }

    #[test]
    fn damper_gated_off_during_extension(
        betadot in 0.0f64..50.0,
        d_v in 0.0f64..500.0,
        d_c in 0.0f64..100.0,
    ) {
        let spec = DamperSpec { viscous: d_v, coulomb: d_c, deadband: 1e-6 };
        prop_assert_eq!(damper_torque(betadot, &spec, &params()), 0.0);
    }

    #[test]
    fn loop_reversal_negates_area(points in prop::collection::vec((0.1f64..0.3, 0.0f64..50.0), 3..40)) {
        let forward = WorkLoop::new(points).unwrap();
        let a = loop_area(&forward).unwrap();
        let b = loop_area(&forward.reversed()).unwrap();
        prop_assert!((a + b).abs() < 1e-9 * a.abs().max(1.0));
    }

    #[test]
    fn decomposition_resums_exactly_for_millijoule_counts(
        e_eff in 0u32..2000,
        e_cf in 0u32..1000,
        e_imp in 0u32..1000,
    ) {
        // Loop energies quoted in whole millijoules are integers, where
        // f64 arithmetic is exact.
        let b = decompose_energy(e_eff as f64, e_cf as f64, e_imp as f64);
        prop_assert_eq!((b.e_cfriction + b.e_impact) + b.e_viscous, b.e_effective);
    }

    #[test]
    fn decomposition_resums_to_an_ulp(
        e_eff in -1.0f64..1.0,
        e_cf in -0.5f64..0.5,
        e_imp in -0.5f64..0.5,
    ) {
        let b = decompose_energy(e_eff, e_cf, e_imp);
        let resum = (b.e_cfriction + b.e_impact) + b.e_viscous;
        let ulp = (e_eff.abs() + e_cf.abs() + e_imp.abs()).max(1e-300) * f64::EPSILON;
        prop_assert!((resum - b.e_effective).abs() <= ulp);
    }

    #[test]
    fn full_rejection_scales_linearly(dh in 0.0f64..0.1, factor in 1.0f64..4.0) {
        let p = params();
        let base = full_rejection(dh, &p);
        prop_assert!((full_rejection(factor * dh, &p) - factor * base).abs() < 1e-12);
        let scaled_mass = LegParams { mass: factor * p.mass, ..p };
        prop_assert!((full_rejection(dh, &scaled_mass) - factor * base).abs() < 1e-12);
    }

    #[test]
    fn moving_average_is_linear_pointwise(
        raw in prop::collection::vec(-10.0f64..10.0, 41..120),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let times: Vec<f64> = (0..raw.len()).map(|i| i as f64).collect();
        let half: Vec<f64> = raw.iter().map(|v| v * 0.5 + 1.0).collect();
        let x = TimeSeries::new("x", times.clone(), raw).unwrap();
        let y = TimeSeries::new("y", times.clone(), half).unwrap();
        let combo_values: Vec<f64> = x
            .values()
            .iter()
            .zip(y.values())
            .map(|(xv, yv)| a * xv + b * yv)
            .collect();
        let combo = TimeSeries::new("combo", times, combo_values).unwrap();
        let lhs = moving_average(&combo, 21).unwrap();
        let ma_x = moving_average(&x, 21).unwrap();
        let ma_y = moving_average(&y, 21).unwrap();
        for i in 0..lhs.len() {
            let rhs = a * ma_x.values()[i] + b * ma_y.values()[i];
            prop_assert!((lhs.values()[i] - rhs).abs() < 1e-9);
        }
    }
}
