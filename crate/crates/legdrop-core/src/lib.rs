// Validation checks use `!(x > 0.0)` so that NaN inputs fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Drop-test simulation and energy analysis for a damped two-segment leg.
//!
//! A point mass rides on a two-segment leg whose knee carries a linear
//! spring and a cable-driven damper in parallel. The damper engages at
//! touch-down and decouples as soon as the knee extends again, so all of
//! its negative work happens between impact and maximum compression. This
//! crate simulates vertical drops of that leg, calibrates damping
//! coefficients against target dissipation levels, sweeps ground-height
//! perturbations, and processes drop-bench sensor recordings into work
//! loops and energy decompositions.
//!
//! Every operation is a pure function of its inputs and deterministic on a
//! given build, so drops, grid cells and trials can safely run in
//! parallel; nothing in the crate holds shared mutable state.

pub mod calibrate;
pub mod dynamics;
pub mod energy;
pub mod error;
pub mod export;
pub mod expdata;
pub mod fit;
pub mod geometry;
pub mod ode;
pub mod params;
pub mod sim;

pub use error::{Error, Result};
pub use params::{DamperSpec, LegParams, StanceState};
pub use sim::{simulate_drop, DropConfig, DropSummary, SimTrajectory, SolverSettings};
