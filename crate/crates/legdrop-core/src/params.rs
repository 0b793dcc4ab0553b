//! Model parameters for the two-segment spring-damper leg.
//!
//! The default values match the drop bench hardware: a 0.408 kg leg with
//! 15 cm segments, a 5900 N/m knee spring on a 2.5 cm lever, and a damper
//! cable on a 2 cm lever. The knee rests at 110 deg, which gives a leg
//! resting length of 24.6 cm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;

/// Geometric, inertial and elastic constants of the leg.
///
/// All angles are radians; degree conversion happens only at I/O
/// boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegParams {
    /// Body mass lumped at the hip \[kg\].
    pub mass: f64,
    /// Upper segment length \[m\].
    pub lambda1: f64,
    /// Lower segment length \[m\].
    pub lambda2: f64,
    /// Knee spring stiffness \[N/m\].
    pub stiffness: f64,
    /// Spring lever arm at the knee pulley \[m\].
    pub lever_spring: f64,
    /// Damper lever arm at the knee pulley \[m\].
    pub lever_damper: f64,
    /// Knee resting angle \[rad\].
    pub beta0: f64,
    /// Gravitational acceleration \[m/s^2\].
    pub gravity: f64,
}

impl Default for LegParams {
    fn default() -> Self {
        LegParams {
            mass: 0.408,
            lambda1: 0.15,
            lambda2: 0.15,
            stiffness: 5900.0,
            lever_spring: 0.025,
            lever_damper: 0.02,
            beta0: 110.0_f64.to_radians(),
            gravity: 9.81,
        }
    }
}

impl LegParams {
    /// Leg length at the resting knee angle \[m\].
    pub fn resting_length(&self) -> f64 {
        geometry::leg_length_unchecked(self.beta0, self)
    }

    /// Torsional spring constant about the knee, `k * r_k^2` \[N m/rad\].
    pub fn knee_stiffness(&self) -> f64 {
        self.stiffness * self.lever_spring * self.lever_spring
    }

    pub fn validate(&self) -> Result<()> {
        let positive: [(&'static str, f64); 7] = [
            ("mass", self.mass),
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
            ("stiffness", self.stiffness),
            ("lever_spring", self.lever_spring),
            ("lever_damper", self.lever_damper),
            ("gravity", self.gravity),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::Invalid {
                    name,
                    value,
                    reason: "must be strictly positive",
                });
            }
        }
        if !(self.beta0 > 0.0 && self.beta0 < std::f64::consts::PI) {
            return Err(Error::Invalid {
                name: "beta0",
                value: self.beta0,
                reason: "resting knee angle must lie in (0, pi)",
            });
        }
        let l0 = self.resting_length();
        if !(l0 > 0.0 && l0 < self.lambda1 + self.lambda2) {
            return Err(Error::Invalid {
                name: "beta0",
                value: self.beta0,
                reason: "resting length must lie strictly between 0 and lambda1 + lambda2",
            });
        }
        Ok(())
    }
}

/// Damping law of the knee damper: a Coulomb (constant-magnitude) term plus
/// a viscous (rate-proportional) term. The two pure laws are the cases
/// `coulomb = 0` and `viscous = 0`; mixed coefficients are accepted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DamperSpec {
    /// Viscous coefficient d_v \[N s/m\].
    pub viscous: f64,
    /// Coulomb coefficient d_c \[N\].
    pub coulomb: f64,
    /// Knee angular speeds below this produce no damper torque \[rad/s\].
    /// Keeps the Coulomb sign function from chattering at tiny rates.
    pub deadband: f64,
}

impl Default for DamperSpec {
    fn default() -> Self {
        DamperSpec {
            viscous: 0.0,
            coulomb: 0.0,
            deadband: 1e-6,
        }
    }
}

impl DamperSpec {
    pub fn pure_viscous(d_v: f64) -> Self {
        DamperSpec {
            viscous: d_v,
            ..Default::default()
        }
    }

    pub fn pure_coulomb(d_c: f64) -> Self {
        DamperSpec {
            coulomb: d_c,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.viscous >= 0.0) || !self.viscous.is_finite() {
            return Err(Error::Invalid {
                name: "viscous",
                value: self.viscous,
                reason: "viscous coefficient must be >= 0",
            });
        }
        if !(self.coulomb >= 0.0) || !self.coulomb.is_finite() {
            return Err(Error::Invalid {
                name: "coulomb",
                value: self.coulomb,
                reason: "coulomb coefficient must be >= 0",
            });
        }
        if !(self.deadband > 0.0) || !self.deadband.is_finite() {
            return Err(Error::Invalid {
                name: "deadband",
                value: self.deadband,
                reason: "velocity deadband must be > 0",
            });
        }
        Ok(())
    }
}

/// Instantaneous stance state of the leg. `beta` and `betadot` are slaved
/// to `y` and `ydot` through the contact constraint `y = leg_length(beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StanceState {
    /// Hip height above ground \[m\].
    pub y: f64,
    /// Hip vertical velocity \[m/s\].
    pub ydot: f64,
    /// Knee angle \[rad\].
    pub beta: f64,
    /// Knee angular velocity \[rad/s\].
    pub betadot: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_params_are_valid() {
        LegParams::default().validate().unwrap();
        DamperSpec::default().validate().unwrap();
    }

    #[test]
    fn resting_length_matches_hardware() {
        let p = LegParams::default();
        assert!((p.resting_length() - 0.246).abs() < 1e-3);
    }

    #[test]
    fn negative_mass_rejected() {
        let p = LegParams {
            mass: -1.0,
            ..Default::default()
        };
        assert!(matches!(
            p.validate(),
            Err(Error::Invalid { name: "mass", .. })
        ));
    }

    #[test]
    fn beta0_out_of_range_rejected() {
        let p = LegParams {
            beta0: 3.5,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn negative_coefficients_rejected() {
        assert!(DamperSpec::pure_viscous(-1.0).validate().is_err());
        assert!(DamperSpec::pure_coulomb(-1.0).validate().is_err());
        let s = DamperSpec {
            deadband: 0.0,
            ..Default::default()
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn mixed_damping_allowed() {
        let s = DamperSpec {
            viscous: 10.0,
            coulomb: 5.0,
            deadband: 1e-6,
        };
        s.validate().unwrap();
    }
}
