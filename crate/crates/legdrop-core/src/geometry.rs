//! Knee angle <-> leg length kinematics of the two-segment leg.
//!
//! The hip, knee and foot form a triangle with side lengths `lambda1`,
//! `lambda2` and the leg length, so the law of cosines maps the knee angle
//! to the leg length and back. With the foot pinned under the hip, the hip
//! height during contact equals the leg length.

use crate::error::{Error, Result};
use crate::params::LegParams;

/// Leg length for a knee angle, without the domain check. Used where the
/// angle is known to be valid (e.g. derived quantities of checked params).
pub(crate) fn leg_length_unchecked(beta: f64, params: &LegParams) -> f64 {
    let (l1, l2) = (params.lambda1, params.lambda2);
    (l1 * l1 + l2 * l2 - 2.0 * l1 * l2 * beta.cos()).sqrt()
}

/// Hip-to-foot distance for knee angle `beta` \[m\].
///
/// Strictly increasing in `beta` on (0, pi): a straighter knee is a longer
/// leg.
pub fn leg_length(beta: f64, params: &LegParams) -> Result<f64> {
    if !(beta > 0.0 && beta < std::f64::consts::PI) || !beta.is_finite() {
        return Err(Error::Invalid {
            name: "beta",
            value: beta,
            reason: "knee angle must lie in (0, pi)",
        });
    }
    Ok(leg_length_unchecked(beta, params))
}

/// Knee angle for a leg length `y` \[rad\]. Inverse of [`leg_length`];
/// unique on (0, pi).
pub fn beta_from_length(y: f64, params: &LegParams) -> Result<f64> {
    let (l1, l2) = (params.lambda1, params.lambda2);
    if !(y > (l1 - l2).abs() && y < l1 + l2) || !y.is_finite() {
        return Err(Error::Invalid {
            name: "y",
            value: y,
            reason: "leg length must lie strictly between |lambda1 - lambda2| and lambda1 + lambda2",
        });
    }
    let cos_beta = (l1 * l1 + l2 * l2 - y * y) / (2.0 * l1 * l2);
    Ok(cos_beta.clamp(-1.0, 1.0).acos())
}

/// Kinematic Jacobian dl/dbeta = lambda1 lambda2 sin(beta) / l(beta)
/// \[m/rad\]. Positive on (0, pi), zero only at the singular endpoints.
pub fn length_jacobian(beta: f64, params: &LegParams) -> Result<f64> {
    let l = leg_length(beta, params)?;
    Ok(params.lambda1 * params.lambda2 * beta.sin() / l)
}

/// Knee angular velocity slaved to the hip velocity through the contact
/// constraint: betadot = ydot / (dl/dbeta) evaluated at beta(y).
pub fn betadot_from(y: f64, ydot: f64, params: &LegParams) -> Result<f64> {
    let beta = beta_from_length(y, params)?;
    let jac = length_jacobian(beta, params)?;
    if jac.abs() < 1e-12 {
        return Err(Error::Singular("dl/dbeta vanishes, cannot slave betadot"));
    }
    Ok(ydot / jac)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> LegParams {
        LegParams::default()
    }

    #[test]
    fn resting_angle_gives_published_length() {
        let l0 = leg_length(110.0_f64.to_radians(), &p()).unwrap();
        assert!((l0 - 0.246).abs() < 1e-3, "l0 = {l0}");
    }

    #[test]
    fn right_angle_closed_form() {
        let l = leg_length(90.0_f64.to_radians(), &p()).unwrap();
        assert!((l - 0.15 * 2.0_f64.sqrt()).abs() < 1e-12);
        let beta = beta_from_length(0.15 * 2.0_f64.sqrt(), &p()).unwrap();
        assert!((beta.to_degrees() - 90.0).abs() < 1e-9);
    }

    #[test]
    fn folded_leg_collapses_to_zero_length() {
        // beta -> 0+ with equal segments folds the foot onto the hip.
        let l = leg_length(1e-9, &p()).unwrap();
        assert!(l < 1e-8);
    }

    #[test]
    fn length_of_resting_pose_inverts_to_resting_angle() {
        // 0.246 m is the resting length rounded to the millimeter, so the
        // recovered angle carries the rounding (~0.2 deg); the exact round
        // trip is covered by the property tests.
        let beta = beta_from_length(0.246, &p()).unwrap();
        assert!((beta.to_degrees() - 110.0).abs() < 0.2);
        let exact = beta_from_length(leg_length(110.0_f64.to_radians(), &p()).unwrap(), &p());
        assert!((exact.unwrap().to_degrees() - 110.0).abs() < 1e-10);
    }

    #[test]
    fn out_of_range_inputs_rejected() {
        assert!(leg_length(0.0, &p()).is_err());
        assert!(leg_length(std::f64::consts::PI, &p()).is_err());
        assert!(leg_length(f64::NAN, &p()).is_err());
        assert!(beta_from_length(0.0, &p()).is_err());
        assert!(beta_from_length(0.30001, &p()).is_err());
    }

    #[test]
    fn betadot_matches_finite_difference() {
        // Central finite difference of leg_length at the slaved angle.
        let params = p();
        let y = 0.24;
        let ydot = -1.0;
        let beta = beta_from_length(y, &params).unwrap();
        let h = 1e-7;
        let dl_dbeta = (leg_length(beta + h, &params).unwrap()
            - leg_length(beta - h, &params).unwrap())
            / (2.0 * h);
        let expected = ydot / dl_dbeta;
        let got = betadot_from(y, ydot, &params).unwrap();
        assert!(
            ((got - expected) / expected).abs() < 1e-6,
            "got {got}, expected {expected}"
        );
    }

    #[test]
    fn betadot_is_linear_in_ydot_and_zero_at_rest() {
        let params = p();
        assert_eq!(betadot_from(0.24, 0.0, &params).unwrap(), 0.0);
        let b1 = betadot_from(0.24, -1.0, &params).unwrap();
        let b2 = betadot_from(0.24, -2.0, &params).unwrap();
        assert!((b2 - 2.0 * b1).abs() < 1e-12);
        assert!(b1 < 0.0, "flexing leg has negative betadot");
    }
}
