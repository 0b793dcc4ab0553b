//! Force and torque laws of the spring-damper knee.
//!
//! The knee carries a linear spring on lever arm `r_k` and a cable-driven
//! damper on lever arm `r_d`. The spring always acts; the damper cable goes
//! slack as soon as the knee extends, so damper torque exists only while
//! the knee flexes. Sign convention: torque > 0 extends the leg, so the
//! spring torque is `k r_k^2 (beta0 - beta)` and both damper terms oppose
//! flexion.

use crate::error::{Error, Result};
use crate::geometry;
use crate::params::{DamperSpec, LegParams, StanceState};

/// Damper torque at knee rate `betadot` \[N m\].
///
/// Zero during extension (`betadot >= 0`, slack cable) and inside the
/// velocity deadband; otherwise `-d_c r_d sign(betadot) - d_v r_d^2 betadot`,
/// which is >= 0 while the knee flexes.
pub fn damper_torque(betadot: f64, spec: &DamperSpec, params: &LegParams) -> f64 {
    if betadot >= 0.0 || betadot.abs() < spec.deadband {
        return 0.0;
    }
    let r_d = params.lever_damper;
    -spec.coulomb * r_d * betadot.signum() - spec.viscous * r_d * r_d * betadot
}

/// Total knee torque: spring plus damper \[N m\].
pub fn knee_torque(beta: f64, betadot: f64, spec: &DamperSpec, params: &LegParams) -> f64 {
    params.knee_stiffness() * (params.beta0 - beta) + damper_torque(betadot, spec, params)
}

/// Vertical force transmitted to the hip by the leg under knee torque
/// `tau` \[N\]: `y tau / (lambda1 lambda2 sin beta)`. Zero in flight by
/// convention (the caller gates on contact).
pub fn leg_force(y: f64, beta: f64, tau: f64, params: &LegParams) -> Result<f64> {
    let s = beta.sin();
    if s.abs() < 1e-12 {
        return Err(Error::Singular("sin(beta) = 0 in leg force"));
    }
    Ok(y * tau / (params.lambda1 * params.lambda2 * s))
}

/// Time derivative of the stance state plus the instantaneous damper
/// dissipation rate.
#[derive(Debug, Clone, Copy)]
pub struct StanceRhs {
    /// dy/dt \[m/s\].
    pub ydot: f64,
    /// d(ydot)/dt \[m/s^2\].
    pub yddot: f64,
    /// Power removed by the damper, `-tau_d * betadot` \[W\]; >= 0.
    pub dissipation_rate: f64,
    /// Leg force at this state \[N\].
    pub force: f64,
    /// Damper torque at this state \[N m\].
    pub tau_d: f64,
}

/// Stance dynamics: `yddot = F_leg / m - g` with the knee slaved to the
/// vertical coordinate through the contact constraint.
pub fn stance_rhs(state: &StanceState, params: &LegParams, spec: &DamperSpec) -> Result<StanceRhs> {
    let tau_d = damper_torque(state.betadot, spec, params);
    let tau = params.knee_stiffness() * (params.beta0 - state.beta) + tau_d;
    let force = leg_force(state.y, state.beta, tau, params)?;
    Ok(StanceRhs {
        ydot: state.ydot,
        yddot: force / params.mass - params.gravity,
        dissipation_rate: -tau_d * state.betadot,
        force,
        tau_d,
    })
}

/// Build the full stance state from (y, ydot) through the contact
/// constraint.
pub fn slaved_state(y: f64, ydot: f64, params: &LegParams) -> Result<StanceState> {
    let beta = geometry::beta_from_length(y, params)?;
    let betadot = geometry::betadot_from(y, ydot, params)?;
    Ok(StanceState {
        y,
        ydot,
        beta,
        betadot,
    })
}

/// Elastic energy stored in the knee spring at angle `beta` \[J\].
pub fn spring_energy(beta: f64, params: &LegParams) -> f64 {
    let d = params.beta0 - beta;
    0.5 * params.knee_stiffness() * d * d
}

/// Mechanical energy of a stance state relative to the resting leg length
/// datum \[J\]: kinetic + gravitational + spring.
pub fn mechanical_energy(state: &StanceState, params: &LegParams) -> f64 {
    let l0 = params.resting_length();
    0.5 * params.mass * state.ydot * state.ydot
        + params.mass * params.gravity * (state.y - l0)
        + spring_energy(state.beta, params)
}

/// Hip height at which the spring force balances gravity. The quasi-static
/// rest pose of the loaded leg.
pub fn equilibrium_height(params: &LegParams) -> Result<f64> {
    // F_leg(beta) - m g is strictly decreasing in beta near beta0 (shorter
    // leg -> more spring torque), so bisection on beta is safe.
    let target = params.mass * params.gravity;
    let force_at = |beta: f64| -> Result<f64> {
        let y = geometry::leg_length(beta, params)?;
        let tau = params.knee_stiffness() * (params.beta0 - beta);
        leg_force(y, beta, tau, params)
    };
    let mut lo = 0.2 * params.beta0;
    let mut hi = params.beta0;
    let f_lo = force_at(lo)? - target;
    // At beta0 the spring torque vanishes, so force - target < 0 there.
    if f_lo < 0.0 {
        return Err(Error::Integration(format!(
            "spring cannot support the weight quasi-statically (deficit {:.3} N at deep flexion)",
            -f_lo
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (force_at(mid)? - target) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    geometry::leg_length(0.5 * (lo + hi), params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> LegParams {
        LegParams::default()
    }

    #[test]
    fn damper_inactive_during_extension() {
        let spec = DamperSpec {
            viscous: 119.4,
            coulomb: 29.3,
            deadband: 1e-6,
        };
        assert_eq!(damper_torque(1.0, &spec, &p()), 0.0);
        assert_eq!(damper_torque(0.0, &spec, &p()), 0.0);
        assert_eq!(damper_torque(1e-9, &spec, &p()), 0.0);
    }

    #[test]
    fn viscous_torque_magnitude() {
        let spec = DamperSpec::pure_viscous(119.4);
        let tau = damper_torque(-1.0, &spec, &p());
        assert!((tau - 119.4 * 0.02 * 0.02).abs() < 1e-12, "tau = {tau}");
    }

    #[test]
    fn coulomb_torque_is_speed_independent() {
        let spec = DamperSpec::pure_coulomb(29.3);
        let slow = damper_torque(-0.5, &spec, &p());
        let fast = damper_torque(-5.0, &spec, &p());
        assert!((slow - 29.3 * 0.02).abs() < 1e-12);
        assert_eq!(slow, fast);
    }

    #[test]
    fn deadband_suppresses_tiny_rates() {
        let spec = DamperSpec {
            coulomb: 29.3,
            deadband: 1e-3,
            ..Default::default()
        };
        assert_eq!(damper_torque(-1e-4, &spec, &p()), 0.0);
        assert!(damper_torque(-1e-2, &spec, &p()) > 0.0);
    }

    #[test]
    fn spring_torque_extends_a_flexed_leg() {
        let params = p();
        let none = DamperSpec::default();
        // At rest pose with no motion the knee is torque free.
        assert_eq!(knee_torque(params.beta0, 0.0, &none, &params), 0.0);
        let tau = knee_torque(params.beta0 - 0.1, 0.0, &none, &params);
        assert!((tau - 5900.0 * 0.025 * 0.025 * 0.1).abs() < 1e-12);
        assert!(tau > 0.0);
    }

    #[test]
    fn spring_and_damper_torques_superpose() {
        let params = p();
        let spec = DamperSpec {
            viscous: 50.0,
            coulomb: 10.0,
            deadband: 1e-6,
        };
        let beta = params.beta0 - 0.2;
        let betadot = -3.0;
        let total = knee_torque(beta, betadot, &spec, &params);
        let spring = knee_torque(beta, betadot, &DamperSpec::default(), &params);
        let damper = damper_torque(betadot, &spec, &params);
        assert!((total - (spring + damper)).abs() < 1e-12);
    }

    #[test]
    fn unloaded_leg_transmits_no_force() {
        let params = p();
        assert_eq!(leg_force(0.24, 1.5, 0.0, &params).unwrap(), 0.0);
    }

    #[test]
    fn leg_force_matches_direct_evaluation_and_virtual_work() {
        let params = p();
        let beta = params.beta0;
        let tau = 0.36875;
        let f = leg_force(0.246, beta, tau, &params).unwrap();
        assert!((f - 4.29).abs() < 0.01, "F = {f}");

        // Virtual work route F = tau / (dl/dbeta) on a constraint-consistent
        // state must agree to machine precision.
        let y = geometry::leg_length(beta, &params).unwrap();
        let f_direct = leg_force(y, beta, tau, &params).unwrap();
        let f_vw = tau / geometry::length_jacobian(beta, &params).unwrap();
        assert!(((f_direct - f_vw) / f_vw).abs() < 1e-12);
    }

    #[test]
    fn leg_force_linear_in_torque() {
        let params = p();
        let f1 = leg_force(0.23, 1.6, 0.2, &params).unwrap();
        let f2 = leg_force(0.23, 1.6, 0.4, &params).unwrap();
        assert!((f2 - 2.0 * f1).abs() < 1e-12);
    }

    #[test]
    fn leg_force_singular_at_straight_knee() {
        assert!(leg_force(0.3, std::f64::consts::PI, 1.0, &p()).is_err());
    }

    #[test]
    fn rest_pose_drop_accelerates_at_gravity() {
        let params = p();
        let l0 = params.resting_length();
        let state = slaved_state(l0 - 1e-12, 0.0, &params).unwrap();
        let rhs = stance_rhs(&state, &params, &DamperSpec::default()).unwrap();
        assert!((rhs.yddot + params.gravity).abs() < 1e-6);
    }

    #[test]
    fn force_balance_gives_zero_acceleration() {
        let params = p();
        let y_eq = equilibrium_height(&params).unwrap();
        let state = slaved_state(y_eq, 0.0, &params).unwrap();
        let rhs = stance_rhs(&state, &params, &DamperSpec::default()).unwrap();
        assert!(rhs.yddot.abs() < 1e-9, "yddot = {}", rhs.yddot);
        assert!(y_eq < params.resting_length());
    }

    #[test]
    fn rhs_matches_energy_bookkeeping() {
        // d/dt(mechanical energy) must equal -dissipation_rate, checked by
        // a small explicit step.
        let params = p();
        let spec = DamperSpec {
            viscous: 119.4,
            coulomb: 5.0,
            deadband: 1e-6,
        };
        let state = slaved_state(0.235, -1.2, &params).unwrap();
        let rhs = stance_rhs(&state, &params, &spec).unwrap();
        let delta = 1e-7;
        let next = slaved_state(
            state.y + delta * rhs.ydot,
            state.ydot + delta * rhs.yddot,
            &params,
        )
        .unwrap();
        let de = (mechanical_energy(&next, &params) - mechanical_energy(&state, &params)) / delta;
        assert!(
            (de + rhs.dissipation_rate).abs() < 1e-3 * rhs.dissipation_rate.max(1.0),
            "dE/dt = {de}, dissipation rate = {}",
            rhs.dissipation_rate
        );
    }
}
