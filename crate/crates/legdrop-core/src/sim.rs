//! Single vertical drop of the leg: closed-form flight, event-detected
//! stance integration, scalar summary.
//!
//! The leg is released at rest with foot clearance `h`. Flight is ballistic
//! and handled in closed form, so the stance integration starts exactly at
//! touch-down (`y = l0`, `ydot = -sqrt(2 g h)`). Stance integrates
//! `(y, ydot)` plus the running damper dissipation as a third state with an
//! adaptive Dormand-Prince 5(4) stepper. Events (lift-off, bottom-out,
//! first maximum compression) are located by bisection on a cubic Hermite
//! interpolant inside the accepted step that brackets them; a quiet-velocity
//! detector terminates over-damped runs that never rebound.

use serde::{Deserialize, Serialize};

use crate::dynamics::{self, StanceRhs};
use crate::error::{Error, Result};
use crate::geometry;
use crate::ode::{hermite, Dopri45};
use crate::params::{DamperSpec, LegParams, StanceState};

/// Stance integrator and termination settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    /// Absolute error tolerance of the embedded pair.
    pub abs_tol: f64,
    /// Relative error tolerance of the embedded pair.
    pub rel_tol: f64,
    /// Step size cap \[s\].
    pub max_step: f64,
    /// Wall of simulated time; exceeding it is an integration failure \[s\].
    pub max_sim_time: f64,
    /// Hip speeds below this count as quiet for the settle detector \[m/s\].
    pub settle_speed_eps: f64,
    /// Quiet time required to declare the leg settled \[s\].
    pub settle_duration: f64,
    /// Knee angle below which the run terminates as bottomed-out \[rad\].
    pub beta_min: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            abs_tol: 1e-5,
            rel_tol: 1e-5,
            max_step: 1e-5,
            max_sim_time: 2.0,
            settle_speed_eps: 1e-3,
            settle_duration: 0.05,
            beta_min: 10.0_f64.to_radians(),
        }
    }
}

impl SolverSettings {
    pub fn validate(&self, params: &LegParams) -> Result<()> {
        let positive: [(&'static str, f64); 6] = [
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
            ("max_step", self.max_step),
            ("max_sim_time", self.max_sim_time),
            ("settle_speed_eps", self.settle_speed_eps),
            ("settle_duration", self.settle_duration),
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
        if !(self.beta_min > 0.0 && self.beta_min < params.beta0) {
            return Err(Error::Invalid {
                name: "beta_min",
                value: self.beta_min,
                reason: "bottom-out angle must lie in (0, beta0)",
            });
        }
        Ok(())
    }
}

/// One drop: release height plus the reference height it is judged against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DropConfig {
    /// Foot clearance at release \[m\].
    pub height: f64,
    /// Reference drop height for perturbation bookkeeping \[m\].
    pub reference_height: f64,
    pub solver: SolverSettings,
}

impl Default for DropConfig {
    fn default() -> Self {
        DropConfig {
            height: 0.14,
            reference_height: 0.14,
            solver: SolverSettings::default(),
        }
    }
}

impl DropConfig {
    pub fn with_height(height: f64) -> Self {
        DropConfig {
            height,
            ..Default::default()
        }
    }

    pub fn validate(&self, params: &LegParams) -> Result<()> {
        if !(self.height >= 0.0) || !self.height.is_finite() {
            return Err(Error::Invalid {
                name: "height",
                value: self.height,
                reason: "drop height must be >= 0",
            });
        }
        if !(self.reference_height > 0.0) || !self.reference_height.is_finite() {
            return Err(Error::Invalid {
                name: "reference_height",
                value: self.reference_height,
                reason: "reference height must be > 0",
            });
        }
        self.solver.validate(params)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Flight,
    StanceFlexion,
    StanceExtension,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Flight => "flight",
            Phase::StanceFlexion => "stance-flexion",
            Phase::StanceExtension => "stance-extension",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    TouchDown,
    MaxCompression,
    LiftOff,
    Settled,
    BottomOut,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimEvent {
    pub kind: EventKind,
    pub t: f64,
}

/// One recorded integration point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub y: f64,
    pub ydot: f64,
    pub beta: f64,
    pub betadot: f64,
    pub force: f64,
    pub tau_d: f64,
    pub phase: Phase,
}

impl TrajectorySample {
    pub fn state(&self) -> StanceState {
        StanceState {
            y: self.y,
            ydot: self.ydot,
            beta: self.beta,
            betadot: self.betadot,
        }
    }
}

/// Time-resolved record of one drop.
#[derive(Debug, Clone, PartialEq)]
pub struct SimTrajectory {
    pub samples: Vec<TrajectorySample>,
    pub events: Vec<SimEvent>,
}

impl SimTrajectory {
    /// Samples belonging to the stance segment, touch-down first.
    pub fn stance(&self) -> impl Iterator<Item = &TrajectorySample> {
        self.samples.iter().filter(|s| s.phase != Phase::Flight)
    }

    pub fn event_time(&self, kind: EventKind) -> Option<f64> {
        self.events.iter().find(|e| e.kind == kind).map(|e| e.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    LiftedOff,
    Settled,
    BottomedOut,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::LiftedOff => "lifted-off",
            Outcome::Settled => "settled",
            Outcome::BottomedOut => "bottomed-out",
        }
    }
}

/// Scalar results of one drop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DropSummary {
    /// Touch-down speed \[m/s\], positive.
    pub v_touchdown: f64,
    /// Total release energy m g h \[J\].
    pub e_total: f64,
    /// Energy dissipated by the damper over the whole stance \[J\].
    pub e_dissipated: f64,
    /// Lift-off speed \[m/s\], positive; absent when the leg never rebounds.
    pub v_liftoff: Option<f64>,
    /// Minimum leg length reached during stance \[m\].
    pub max_compression: f64,
    /// Time spent in stance, touch-down to termination \[s\].
    pub stance_duration: f64,
    pub outcome: Outcome,
}

/// Stance state at the end of ballistic flight from clearance `h`.
pub fn touchdown_state(h: f64, params: &LegParams) -> Result<StanceState> {
    if !(h >= 0.0) || !h.is_finite() {
        return Err(Error::Invalid {
            name: "height",
            value: h,
            reason: "drop height must be >= 0",
        });
    }
    let l0 = params.resting_length();
    let ydot = -(2.0 * params.gravity * h).sqrt();
    let betadot = geometry::betadot_from(l0, ydot, params)?;
    Ok(StanceState {
        y: l0,
        ydot,
        beta: params.beta0,
        betadot,
    })
}

/// Spacing of the synthesized flight samples \[s\].
const FLIGHT_SAMPLE_DT: f64 = 1e-3;

/// Bisection iterations used to localize an event inside one accepted step.
const EVENT_BISECTIONS: usize = 60;

/// Integration aborts when the controller wants steps below this \[s\].
const MIN_STEP: f64 = 1e-14;

struct StanceRecorder {
    samples: Vec<TrajectorySample>,
    events: Vec<SimEvent>,
    phase: Phase,
    min_y: f64,
}

impl StanceRecorder {
    fn push_state(&mut self, t: f64, y: f64, ydot: f64, params: &LegParams, spec: &DamperSpec) {
        // An event bisected onto a step boundary would duplicate the
        // boundary sample; keep the time axis strictly increasing.
        if let Some(last) = self.samples.last() {
            if t <= last.t {
                self.min_y = self.min_y.min(y);
                return;
            }
        }
        // Samples are only pushed for states already validated by the
        // integrator, so slaving cannot fail here.
        let state = dynamics::slaved_state(y, ydot, params).expect("accepted state in domain");
        let rhs = dynamics::stance_rhs(&state, params, spec).expect("accepted state in domain");
        self.min_y = self.min_y.min(y);
        self.samples.push(TrajectorySample {
            t,
            y,
            ydot,
            beta: state.beta,
            betadot: state.betadot,
            force: rhs.force,
            tau_d: rhs.tau_d,
            phase: self.phase,
        });
    }
}

/// Simulate one drop from release to lift-off or termination.
pub fn simulate_drop(
    params: &LegParams,
    spec: &DamperSpec,
    cfg: &DropConfig,
) -> Result<(SimTrajectory, DropSummary)> {
    params.validate()?;
    spec.validate()?;
    cfg.validate(params)?;

    if cfg.height == 0.0 {
        return quasi_static_settle(params, cfg);
    }

    let l0 = params.resting_length();
    let g = params.gravity;
    let h = cfg.height;
    let t_td = (2.0 * h / g).sqrt();
    let v_td = (2.0 * g * h).sqrt();

    // Ballistic flight, sampled for the record only.
    let mut samples = Vec::new();
    let n_flight = (t_td / FLIGHT_SAMPLE_DT).ceil().max(1.0) as usize;
    for i in 0..n_flight {
        let t = t_td * i as f64 / n_flight as f64;
        samples.push(TrajectorySample {
            t,
            y: l0 + h - 0.5 * g * t * t,
            ydot: -g * t,
            beta: params.beta0,
            betadot: 0.0,
            force: 0.0,
            tau_d: 0.0,
            phase: Phase::Flight,
        });
    }

    let mut rec = StanceRecorder {
        samples,
        events: vec![SimEvent {
            kind: EventKind::TouchDown,
            t: t_td,
        }],
        phase: Phase::StanceFlexion,
        min_y: l0,
    };
    rec.push_state(t_td, l0, -v_td, params, spec);

    let l_bottom = geometry::leg_length(cfg.solver.beta_min, params)?;

    // State vector: [y, ydot, dissipated work]. Geometry violations during
    // trial stages poison the step with NaN, which the error control
    // rejects.
    let mut rhs = |_t: f64, s: &[f64; 3]| -> [f64; 3] {
        match dynamics::slaved_state(s[0], s[1], params)
            .and_then(|st| dynamics::stance_rhs(&st, params, spec))
        {
            Ok(StanceRhs {
                ydot,
                yddot,
                dissipation_rate,
                ..
            }) => [ydot, yddot, dissipation_rate],
            Err(_) => [f64::NAN, f64::NAN, f64::NAN],
        }
    };

    let mut solver: Dopri45<3> =
        Dopri45::new(cfg.solver.abs_tol, cfg.solver.rel_tol, cfg.solver.max_step);
    let mut t = t_td;
    let mut y = [l0, -v_td, 0.0];
    let mut f1 = rhs(t, &y);
    let mut h_step = solver.step_size();
    let mut quiet_since: Option<f64> = None;
    let t_end = t_td + cfg.solver.max_sim_time;
    let step_budget =
        ((cfg.solver.max_sim_time / cfg.solver.max_step) * 10.0) as usize + 1_000_000;
    let mut steps_taken = 0usize;

    let (outcome, t_final, y_final) = 'stance: loop {
        if t >= t_end {
            return Err(Error::Integration(format!(
                "no lift-off or settling within max_sim_time = {} s",
                cfg.solver.max_sim_time
            )));
        }
        steps_taken += 1;
        if steps_taken > step_budget {
            return Err(Error::Integration(format!(
                "step budget exhausted at t = {t} (repeated rejections)"
            )));
        }
        let out = solver.try_step(&mut rhs, t, &y, &f1, h_step);
        if !(out.error <= 1.0) {
            // Rejected (or NaN-poisoned) step: shrink and retry.
            h_step = solver.next_step_size(if out.error.is_finite() {
                out.error
            } else {
                4.0
            });
            if h_step < MIN_STEP {
                return Err(Error::Integration(format!(
                    "step size collapsed at t = {t}"
                )));
            }
            continue;
        }
        if !out.y.iter().all(|v| v.is_finite()) {
            return Err(Error::Integration(format!("non-finite state at t = {t}")));
        }

        let h_acc = h_step;
        let (y0, f0) = (y, f1);
        let y1 = out.y;
        let f_end = out.f_end;
        let t1 = t + h_acc;

        let interp = |theta: f64| hermite(theta, h_acc, &y0, &f0, &y1, &f_end);

        // Bottom-out: leg length falls below the fold limit.
        if y1[0] <= l_bottom {
            let theta = bisect_crossing(|th| l_bottom - interp(th)[0]);
            let t_ev = t + theta * h_acc;
            let s_ev = interp(theta);
            rec.push_state(t_ev, s_ev[0], s_ev[1], params, spec);
            rec.events.push(SimEvent {
                kind: EventKind::BottomOut,
                t: t_ev,
            });
            break 'stance (Outcome::BottomedOut, t_ev, s_ev);
        }

        // Lift-off: leg length recovers l0 while moving up.
        if y1[0] >= l0 && y1[1] > 0.0 {
            let theta = bisect_crossing(|th| interp(th)[0] - l0);
            let t_ev = t + theta * h_acc;
            let mut s_ev = interp(theta);
            s_ev[0] = l0;
            rec.push_state(t_ev, s_ev[0], s_ev[1], params, spec);
            rec.events.push(SimEvent {
                kind: EventKind::LiftOff,
                t: t_ev,
            });
            break 'stance (Outcome::LiftedOff, t_ev, s_ev);
        }

        // First upward velocity crossing = maximum compression.
        if y0[1] < 0.0 && y1[1] >= 0.0 && rec.phase == Phase::StanceFlexion {
            let theta = bisect_crossing(|th| interp(th)[1]);
            let t_ev = t + theta * h_acc;
            let s_ev = interp(theta);
            rec.push_state(t_ev, s_ev[0], s_ev[1], params, spec);
            rec.events.push(SimEvent {
                kind: EventKind::MaxCompression,
                t: t_ev,
            });
            rec.phase = Phase::StanceExtension;
        }

        t = t1;
        y = y1;
        f1 = f_end;
        rec.push_state(t, y[0], y[1], params, spec);

        // Settle detector: continuously quiet below resting length.
        if y[1].abs() < cfg.solver.settle_speed_eps && y[0] < l0 {
            let since = *quiet_since.get_or_insert(t);
            if t - since >= cfg.solver.settle_duration {
                rec.events.push(SimEvent {
                    kind: EventKind::Settled,
                    t,
                });
                break 'stance (Outcome::Settled, t, y);
            }
        } else {
            quiet_since = None;
        }

        h_step = solver.next_step_size(out.error).max(MIN_STEP);
    };

    let summary = DropSummary {
        v_touchdown: v_td,
        e_total: params.mass * g * h,
        e_dissipated: y_final[2],
        v_liftoff: match outcome {
            Outcome::LiftedOff => Some(y_final[1].abs()),
            _ => None,
        },
        max_compression: rec.min_y,
        stance_duration: t_final - t_td,
        outcome,
    };
    Ok((
        SimTrajectory {
            samples: rec.samples,
            events: rec.events,
        },
        summary,
    ))
}

/// Zero-height drop: no kinetic energy at contact, no damper dissipation.
/// Reported as an immediate quasi-static settle at the spring equilibrium.
fn quasi_static_settle(
    params: &LegParams,
    cfg: &DropConfig,
) -> Result<(SimTrajectory, DropSummary)> {
    let l0 = params.resting_length();
    let y_eq = dynamics::equilibrium_height(params)?;
    let beta_eq = geometry::beta_from_length(y_eq, params)?;
    let weight = params.mass * params.gravity;
    let t_settle = cfg.solver.settle_duration;
    let samples = vec![
        TrajectorySample {
            t: 0.0,
            y: l0,
            ydot: 0.0,
            beta: params.beta0,
            betadot: 0.0,
            force: 0.0,
            tau_d: 0.0,
            phase: Phase::StanceFlexion,
        },
        TrajectorySample {
            t: t_settle,
            y: y_eq,
            ydot: 0.0,
            beta: beta_eq,
            betadot: 0.0,
            force: weight,
            tau_d: 0.0,
            phase: Phase::StanceFlexion,
        },
    ];
    let events = vec![
        SimEvent {
            kind: EventKind::TouchDown,
            t: 0.0,
        },
        SimEvent {
            kind: EventKind::Settled,
            t: t_settle,
        },
    ];
    let summary = DropSummary {
        v_touchdown: 0.0,
        e_total: 0.0,
        e_dissipated: 0.0,
        v_liftoff: None,
        max_compression: y_eq,
        stance_duration: t_settle,
        outcome: Outcome::Settled,
    };
    Ok((SimTrajectory { samples, events }, summary))
}

/// Bisect g over theta in [0, 1]; assumes one sign change. Returns the
/// crossing point.
fn bisect_crossing<F: Fn(f64) -> f64>(g: F) -> f64 {
    let mut lo = 0.0;
    let mut hi = 1.0;
    let g_lo = g(lo);
    if g_lo == 0.0 {
        return lo;
    }
    let rising = g_lo < 0.0;
    for _ in 0..EVENT_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let v = g(mid);
        if (v < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> LegParams {
        LegParams::default()
    }

    #[test]
    fn touchdown_closed_form() {
        let td = touchdown_state(0.14, &p()).unwrap();
        assert!((td.ydot + 1.6573).abs() < 1e-4, "ydot = {}", td.ydot);
        assert!((td.y - p().resting_length()).abs() < 1e-12);
        assert_eq!(td.beta, p().beta0);
        let rest = touchdown_state(0.0, &p()).unwrap();
        assert_eq!(rest.ydot, 0.0);
    }

    #[test]
    fn touchdown_energy_matches_release_potential() {
        let params = p();
        let td = touchdown_state(0.14, &params).unwrap();
        let e = 0.5 * params.mass * td.ydot * td.ydot;
        assert!((e - 0.560).abs() < 1e-3, "E = {e}");
    }

    #[test]
    fn undamped_drop_conserves_energy() {
        let params = p();
        let cfg = DropConfig::with_height(0.14);
        let (traj, summary) = simulate_drop(&params, &DamperSpec::default(), &cfg).unwrap();
        assert_eq!(summary.outcome, Outcome::LiftedOff);
        assert!(summary.e_dissipated < 1e-4, "E_D = {}", summary.e_dissipated);
        let v_lo = summary.v_liftoff.unwrap();
        assert!(
            (v_lo - summary.v_touchdown).abs() < 1e-3,
            "v_lo = {v_lo}, v_td = {}",
            summary.v_touchdown
        );
        assert!(traj.event_time(EventKind::MaxCompression).is_some());
        assert!(traj.event_time(EventKind::LiftOff).is_some());
    }

    #[test]
    fn viscous_reference_drop_dissipation() {
        // d_v = 119.4 Ns/m from a 14 cm drop dissipates 295 mJ.
        let params = p();
        let spec = DamperSpec::pure_viscous(119.4);
        let cfg = DropConfig::with_height(0.14);
        let (_, summary) = simulate_drop(&params, &spec, &cfg).unwrap();
        assert!(
            (summary.e_dissipated - 0.295).abs() < 0.005,
            "E_D = {} J",
            summary.e_dissipated
        );
    }

    #[test]
    fn coulomb_step_down_dissipation() {
        let params = p();
        let spec = DamperSpec::pure_coulomb(29.3);
        let cfg = DropConfig::with_height(0.165);
        let (_, summary) = simulate_drop(&params, &spec, &cfg).unwrap();
        assert!(
            (summary.e_dissipated - 0.323).abs() < 0.005,
            "E_D = {} J",
            summary.e_dissipated
        );
    }

    #[test]
    fn coulomb_dissipation_equals_torque_times_flexion_angle() {
        // A constant flexion-gated torque dissipates exactly
        // d_c r_d (beta0 - beta_min): an analytic route independent of the
        // integrated power bookkeeping.
        let params = p();
        let spec = DamperSpec::pure_coulomb(29.3);
        let (_, summary) = simulate_drop(&params, &spec, &DropConfig::with_height(0.14)).unwrap();
        let beta_min = geometry::beta_from_length(summary.max_compression, &params).unwrap();
        let closed_form = 29.3 * params.lever_damper * (params.beta0 - beta_min);
        assert!(
            (summary.e_dissipated - closed_form).abs() < 1e-4,
            "integrated {} J vs closed form {} J",
            summary.e_dissipated,
            closed_form
        );
    }

    #[test]
    fn zero_height_settles_quasi_statically() {
        let params = p();
        let cfg = DropConfig::with_height(0.0);
        let (traj, summary) = simulate_drop(&params, &DamperSpec::default(), &cfg).unwrap();
        assert_eq!(summary.outcome, Outcome::Settled);
        assert_eq!(summary.v_touchdown, 0.0);
        assert_eq!(summary.e_dissipated, 0.0);
        assert!(summary.v_liftoff.is_none());
        assert!(summary.max_compression < params.resting_length());
        assert!(traj.event_time(EventKind::Settled).is_some());
    }

    #[test]
    fn over_damped_run_settles_instead_of_hanging() {
        let params = p();
        let spec = DamperSpec::pure_viscous(5000.0);
        let cfg = DropConfig::with_height(0.14);
        let (_, summary) = simulate_drop(&params, &spec, &cfg).unwrap();
        assert_eq!(summary.outcome, Outcome::Settled);
        assert!(summary.v_liftoff.is_none());
        assert!(summary.e_dissipated > 0.3);
    }

    #[test]
    fn deep_drop_bottoms_out() {
        let params = p();
        // Raise the fold limit so a plain reference drop trips it.
        let mut cfg = DropConfig::with_height(0.14);
        cfg.solver.beta_min = 95.0_f64.to_radians();
        let (traj, summary) = simulate_drop(&params, &DamperSpec::default(), &cfg).unwrap();
        assert_eq!(summary.outcome, Outcome::BottomedOut);
        assert!(traj.event_time(EventKind::BottomOut).is_some());
        let l_limit = geometry::leg_length(cfg.solver.beta_min, &params).unwrap();
        assert!((summary.max_compression - l_limit).abs() < 1e-6);
    }

    #[test]
    fn trajectory_time_strictly_increasing_and_flight_force_free() {
        let params = p();
        let spec = DamperSpec::pure_viscous(119.4);
        let (traj, _) = simulate_drop(&params, &spec, &DropConfig::with_height(0.14)).unwrap();
        for pair in traj.samples.windows(2) {
            assert!(pair[1].t > pair[0].t);
        }
        let beta0 = params.beta0;
        for s in &traj.samples {
            match s.phase {
                Phase::Flight => assert_eq!(s.force, 0.0),
                _ => {
                    assert!(s.force >= 0.0);
                    // In contact the knee only flexes away from its rest
                    // pose.
                    assert!(s.beta <= beta0 + 1e-9, "beta = {}", s.beta);
                    assert!(s.beta > 0.0);
                }
            }
        }
    }

    #[test]
    fn summary_invariants_hold() {
        let params = p();
        let spec = DamperSpec::pure_coulomb(29.3);
        let cfg = DropConfig::with_height(0.14);
        let (_, s) = simulate_drop(&params, &spec, &cfg).unwrap();
        assert!(s.e_dissipated >= 0.0);
        assert!(s.e_dissipated <= s.e_total + 1e-6);
        assert!((s.v_touchdown - (2.0 * params.gravity * 0.14).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn identical_inputs_are_bitwise_deterministic() {
        let params = p();
        let spec = DamperSpec::pure_viscous(68.0);
        let cfg = DropConfig::with_height(0.14);
        let (_, a) = simulate_drop(&params, &spec, &cfg).unwrap();
        let (_, b) = simulate_drop(&params, &spec, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_inputs_rejected() {
        let params = p();
        let cfg = DropConfig::with_height(-0.1);
        assert!(simulate_drop(&params, &DamperSpec::default(), &cfg).is_err());
        let bad = DamperSpec::pure_viscous(-1.0);
        assert!(simulate_drop(&params, &bad, &DropConfig::default()).is_err());
    }
}
