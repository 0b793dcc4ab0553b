//! Work loops and scalar energy quantities.
//!
//! The area enclosed by the vertical force vs leg length curve over one
//! stance is the energy the leg dissipated in that drop. For simulated
//! trajectories the same number is available as the time integral of the
//! damper power, which gives the two independent routes the tests compare.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;
use crate::params::LegParams;
use crate::sim::SimTrajectory;

/// Ordered (leg length \[m\], vertical force \[N\]) samples over one
/// stance, touch-down first. Net-dissipative loops run counter-clockwise;
/// closing the path back to the first sample is implicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkLoop {
    samples: Vec<(f64, f64)>,
    /// True when the recorded path explicitly returns to its first point.
    pub closed: bool,
}

impl WorkLoop {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::Degenerate(format!(
                "work loop needs at least 3 samples, got {}",
                samples.len()
            )));
        }
        let closed = samples.first() == samples.last();
        Ok(WorkLoop { samples, closed })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn min_length(&self) -> f64 {
        self.samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min)
    }

    pub fn max_length(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.0)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Reverse the traversal direction (orientation flips the signed area).
    pub fn reversed(&self) -> WorkLoop {
        let mut samples = self.samples.clone();
        samples.reverse();
        WorkLoop {
            samples,
            closed: self.closed,
        }
    }
}

/// Signed shoelace area of the implicitly closed loop \[J\].
/// Counter-clockwise (dissipative) loops are positive; the magnitude is the
/// dissipated energy.
pub fn loop_area(workloop: &WorkLoop) -> Result<f64> {
    let s = workloop.samples();
    if s.len() < 3 {
        return Err(Error::Degenerate(
            "shoelace area needs at least 3 samples".into(),
        ));
    }
    let mut twice_area = 0.0;
    for i in 0..s.len() {
        let (x0, y0) = s[i];
        let (x1, y1) = s[(i + 1) % s.len()];
        twice_area += x0 * y1 - x1 * y0;
    }
    Ok(0.5 * twice_area)
}

/// Damper energy removed over the stance of a simulated trajectory \[J\]:
/// trapezoidal integral of `-tau_d * betadot`.
pub fn dissipated_energy(traj: &SimTrajectory) -> Result<f64> {
    let stance: Vec<_> = traj.stance().collect();
    if stance.len() < 2 {
        return Err(Error::Degenerate(
            "trajectory has no stance segment".into(),
        ));
    }
    let mut total = 0.0;
    for pair in stance.windows(2) {
        let p0 = -pair[0].tau_d * pair[0].betadot;
        let p1 = -pair[1].tau_d * pair[1].betadot;
        total += 0.5 * (p0 + p1) * (pair[1].t - pair[0].t);
    }
    Ok(total)
}

/// Change in dissipated energy caused by a height perturbation \[J\].
pub fn delta_ed(e_d_perturbed: f64, e_d_reference: f64) -> f64 {
    e_d_perturbed - e_d_reference
}

/// Energy a damper would have to absorb to fully reject a ground-height
/// change `delta_h` \[J\]: the perturbation energy m g delta_h.
pub fn full_rejection(delta_h: f64, params: &LegParams) -> f64 {
    params.mass * params.gravity * delta_h
}

/// Work loop of a simulated stance: (leg length from the knee angle,
/// leg force), ordered by time from touch-down.
pub fn workloop_from_trajectory(traj: &SimTrajectory, params: &LegParams) -> Result<WorkLoop> {
    let samples: Vec<(f64, f64)> = traj
        .stance()
        .map(|s| (geometry::leg_length_unchecked(s.beta, params), s.force))
        .collect();
    if samples.len() < 3 {
        return Err(Error::Degenerate(
            "trajectory has no stance segment".into(),
        ));
    }
    WorkLoop::new(samples)
}

/// Four-way split of a measured loop energy. The components sum to the
/// effective total exactly, by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    /// Whole work-loop area \[J\].
    pub e_effective: f64,
    /// Coulomb friction loss, from the slow-drop loop \[J\].
    pub e_cfriction: f64,
    /// Unsprung-mass impact loss \[J\].
    pub e_impact: f64,
    /// Remainder attributed to viscous damping \[J\].
    pub e_viscous: f64,
}

impl EnergyBreakdown {
    /// A negative component signals inconsistent measurements; callers
    /// should surface it as a warning rather than an error.
    pub fn has_negative_component(&self) -> bool {
        self.e_effective < 0.0
            || self.e_cfriction < 0.0
            || self.e_impact < 0.0
            || self.e_viscous < 0.0
    }
}

/// Split an effective loop energy into friction, impact and viscous parts:
/// the viscous share is what remains after the other two measured losses.
/// Re-summing as `(e_cfriction + e_impact) + e_viscous` recovers
/// `e_effective` (exactly, for same-scale inputs).
pub fn decompose_energy(e_effective: f64, e_cfriction: f64, e_impact: f64) -> EnergyBreakdown {
    EnergyBreakdown {
        e_effective,
        e_cfriction,
        e_impact,
        e_viscous: e_effective - (e_cfriction + e_impact),
    }
}

/// Cut a slow-drop loop to the compression range actually reached by the
/// corresponding free drop: samples shorter than the free drop's minimum
/// leg length are removed.
pub fn truncate_to_max_compression(slow: &WorkLoop, free: &WorkLoop) -> Result<WorkLoop> {
    let cut = free.min_length();
    if slow.max_length() < free.min_length() || slow.min_length() > free.max_length() {
        return Err(Error::Window(format!(
            "slow loop lengths [{:.4}, {:.4}] do not overlap free loop [{:.4}, {:.4}]",
            slow.min_length(),
            slow.max_length(),
            free.min_length(),
            free.max_length()
        )));
    }
    let kept: Vec<(f64, f64)> = slow
        .samples()
        .iter()
        .copied()
        .filter(|&(l, _)| l >= cut)
        .collect();
    WorkLoop::new(kept)
}
