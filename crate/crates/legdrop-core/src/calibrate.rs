//! Damping-coefficient calibration and the drop-height sweep grids.
//!
//! A damping level is specified as the energy the damper must dissipate in
//! a reference-height drop. Because that energy grows monotonically with
//! the coefficient over the brackets of interest, a plain bisection on the
//! coefficient is the most robust way to hit a target level; every function
//! evaluation is one full drop simulation.

use serde::{Deserialize, Serialize};

use crate::energy;
use crate::error::{Error, Result};
use crate::params::{DamperSpec, LegParams};
use crate::sim::{simulate_drop, DropConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DampingMode {
    Viscous,
    Coulomb,
}

impl DampingMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DampingMode::Viscous => "viscous",
            DampingMode::Coulomb => "coulomb",
        }
    }

    /// Pure damper of this mode with the given coefficient.
    pub fn damper(&self, coefficient: f64) -> DamperSpec {
        match self {
            DampingMode::Viscous => DamperSpec::pure_viscous(coefficient),
            DampingMode::Coulomb => DamperSpec::pure_coulomb(coefficient),
        }
    }

    /// Default search bracket: wide enough to cover every published set
    /// with margin.
    pub fn default_bracket(&self) -> (f64, f64) {
        match self {
            DampingMode::Viscous => (0.0, 1000.0),
            DampingMode::Coulomb => (0.0, 200.0),
        }
    }
}

/// Dissipation level to realize at the reference drop height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingTarget {
    /// Reference-height dissipation to hit \[J\].
    pub e_target: f64,
    pub mode: DampingMode,
    /// Coefficient search interval.
    pub bracket: (f64, f64),
    /// Accepted |E_D0 - target| residual \[J\].
    pub tol: f64,
}

impl DampingTarget {
    pub fn new(e_target: f64, mode: DampingMode) -> Self {
        DampingTarget {
            e_target,
            mode,
            bracket: mode.default_bracket(),
            tol: 0.5e-3,
        }
    }
}

/// The five dissipation levels used throughout the sweeps: fractions 0.1
/// through 0.5 of m g l0.
pub fn target_levels(params: &LegParams) -> [f64; 5] {
    let base = params.mass * params.gravity * params.resting_length();
    [0.1, 0.2, 0.3, 0.4, 0.5].map(|f| f * base)
}

/// Reference-height dissipation for one coefficient.
fn reference_dissipation(
    params: &LegParams,
    mode: DampingMode,
    coefficient: f64,
    cfg: &DropConfig,
) -> Result<f64> {
    let ref_cfg = DropConfig {
        height: cfg.reference_height,
        ..*cfg
    };
    let (_, summary) = simulate_drop(params, &mode.damper(coefficient), &ref_cfg)?;
    Ok(summary.e_dissipated)
}

/// Find the coefficient whose reference-height drop dissipates the target
/// energy, by bisection on the bracket.
pub fn calibrate(params: &LegParams, target: &DampingTarget, cfg: &DropConfig) -> Result<f64> {
    if !(target.e_target >= 0.0) || !target.e_target.is_finite() {
        return Err(Error::Invalid {
            name: "e_target",
            value: target.e_target,
            reason: "target dissipation must be >= 0",
        });
    }
    if !(target.tol > 0.0) {
        return Err(Error::Invalid {
            name: "tol",
            value: target.tol,
            reason: "tolerance must be > 0",
        });
    }
    let (mut lo, mut hi) = target.bracket;
    if !(lo >= 0.0 && hi > lo) {
        return Err(Error::Invalid {
            name: "bracket",
            value: lo,
            reason: "bracket must satisfy 0 <= lo < hi",
        });
    }
    if target.e_target == 0.0 {
        return Ok(0.0);
    }

    let mut f_lo = reference_dissipation(params, target.mode, lo, cfg)? - target.e_target;
    let mut f_hi = reference_dissipation(params, target.mode, hi, cfg)? - target.e_target;
    if f_lo.abs() <= target.tol {
        return Ok(lo);
    }
    if f_hi.abs() <= target.tol {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: f_lo + target.e_target,
            f_hi: f_hi + target.e_target,
        });
    }

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = reference_dissipation(params, target.mode, mid, cfg)? - target.e_target;
        if f_mid.abs() <= target.tol {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Err(Error::NoConvergence {
        iterations: 200,
        residual: f_lo.abs().min(f_hi.abs()),
    })
}

/// Published damping coefficients of the five dissipation sets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub set: usize,
    /// Pure-viscous coefficient d_v \[N s/m\].
    pub viscous: f64,
    /// Pure-Coulomb coefficient d_c \[N\].
    pub coulomb: f64,
}

pub const PUBLISHED_COEFFICIENTS: [CoefficientSet; 5] = [
    CoefficientSet {
        set: 1,
        viscous: 29.5,
        coulomb: 7.7,
    },
    CoefficientSet {
        set: 2,
        viscous: 68.0,
        coulomb: 17.3,
    },
    CoefficientSet {
        set: 3,
        viscous: 119.4,
        coulomb: 29.3,
    },
    CoefficientSet {
        set: 4,
        viscous: 197.1,
        coulomb: 46.1,
    },
    CoefficientSet {
        set: 5,
        viscous: 349.4,
        coulomb: 76.3,
    },
];

/// Where the sweep takes its damping coefficients from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientSource {
    /// Use [`PUBLISHED_COEFFICIENTS`] as-is.
    Published,
    /// Re-calibrate each set against its dissipation level first.
    Calibrated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeightCondition {
    StepUp,
    Reference,
    StepDown,
}

impl HeightCondition {
    pub fn as_str(&self) -> &'static str {
        match self {
            HeightCondition::StepUp => "step-up",
            HeightCondition::Reference => "reference",
            HeightCondition::StepDown => "step-down",
        }
    }
}

/// One grid cell of the dissipation table. Every cell is backed by one
/// drop simulation; the ratio column is recomputed, never copied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub set: usize,
    pub mode: DampingMode,
    pub coefficient: f64,
    pub height: f64,
    pub condition: HeightCondition,
    /// Dissipated energy of this drop \[J\].
    pub e_dissipated: f64,
    /// Change versus the reference-height drop of the same damper \[J\].
    pub delta_ed: f64,
    /// delta_ed / (m g delta_h) for the step conditions; E_D0 / E_T0 for
    /// the reference column.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub reference_height: f64,
    pub delta_h: f64,
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    pub fn cell(&self, set: usize, mode: DampingMode, condition: HeightCondition) -> Option<&SweepCell> {
        self.cells
            .iter()
            .find(|c| c.set == set && c.mode == mode && c.condition == condition)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Table2Options {
    pub source: CoefficientSource,
    /// Step size of the up/down perturbation \[m\].
    pub delta_h: f64,
    /// Which of the five sets to run; empty means all.
    pub set_filter: Option<[bool; 5]>,
}

impl Default for Table2Options {
    fn default() -> Self {
        Table2Options {
            source: CoefficientSource::Published,
            delta_h: 0.025,
            set_filter: None,
        }
    }
}

fn cell_context(e: Error, set: usize, mode: DampingMode, height: f64) -> Error {
    match e {
        Error::Integration(msg) => Error::Integration(format!(
            "set {set} {} h = {height}: {msg}",
            mode.as_str()
        )),
        other => other,
    }
}

/// Run the full dissipation grid: each selected set and damping mode is
/// dropped from the step-up, reference and step-down heights.
pub fn run_table2(
    params: &LegParams,
    cfg: &DropConfig,
    options: &Table2Options,
) -> Result<SweepResult> {
    if !(options.delta_h >= 0.0) || options.delta_h >= cfg.reference_height {
        return Err(Error::Invalid {
            name: "delta_h",
            value: options.delta_h,
            reason: "perturbation must satisfy 0 <= delta_h < reference height",
        });
    }
    let h0 = cfg.reference_height;
    let e_t0 = params.mass * params.gravity * h0;
    let delta_et = params.mass * params.gravity * options.delta_h;
    let levels = target_levels(params);

    let mut cells = Vec::new();
    for coeffs in PUBLISHED_COEFFICIENTS {
        if let Some(filter) = options.set_filter {
            if !filter[coeffs.set - 1] {
                continue;
            }
        }
        for mode in [DampingMode::Viscous, DampingMode::Coulomb] {
            let coefficient = match options.source {
                CoefficientSource::Published => match mode {
                    DampingMode::Viscous => coeffs.viscous,
                    DampingMode::Coulomb => coeffs.coulomb,
                },
                CoefficientSource::Calibrated => {
                    let target = DampingTarget::new(levels[coeffs.set - 1], mode);
                    calibrate(params, &target, cfg)?
                }
            };
            let spec = mode.damper(coefficient);

            let run = |height: f64| -> Result<f64> {
                let cell_cfg = DropConfig { height, ..*cfg };
                let (_, summary) = simulate_drop(params, &spec, &cell_cfg)
                    .map_err(|e| cell_context(e, coeffs.set, mode, height))?;
                Ok(summary.e_dissipated)
            };

            let e_ref = run(h0)?;
            let conditions = [
                (HeightCondition::StepUp, h0 - options.delta_h),
                (HeightCondition::Reference, h0),
                (HeightCondition::StepDown, h0 + options.delta_h),
            ];
            for (condition, height) in conditions {
                let e_d = if condition == HeightCondition::Reference {
                    e_ref
                } else {
                    run(height)?
                };
                let delta = energy::delta_ed(e_d, e_ref);
                let ratio = match condition {
                    HeightCondition::Reference => e_d / e_t0,
                    HeightCondition::StepUp => {
                        if delta_et == 0.0 {
                            0.0
                        } else {
                            delta / -delta_et
                        }
                    }
                    HeightCondition::StepDown => {
                        if delta_et == 0.0 {
                            0.0
                        } else {
                            delta / delta_et
                        }
                    }
                };
                cells.push(SweepCell {
                    set: coeffs.set,
                    mode,
                    coefficient,
                    height,
                    condition,
                    e_dissipated: e_d,
                    delta_ed: delta,
                    ratio,
                });
            }
        }
    }
    Ok(SweepResult {
        reference_height: h0,
        delta_h: options.delta_h,
        cells,
    })
}

/// One point of a drop-height perturbation sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub delta_h: f64,
    pub e_dissipated: f64,
    pub delta_ed: f64,
    /// m g delta_h, the full-rejection line \[J\].
    pub full_rejection: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaHCurve {
    pub reference_height: f64,
    pub reference_e_d: f64,
    pub points: Vec<SweepPoint>,
}

/// Dissipation change over a grid of height perturbations for one damper.
pub fn sweep_delta_h(
    params: &LegParams,
    spec: &DamperSpec,
    cfg: &DropConfig,
    delta_hs: &[f64],
) -> Result<DeltaHCurve> {
    for &dh in delta_hs {
        if cfg.reference_height + dh < 0.0 {
            return Err(Error::Invalid {
                name: "delta_h",
                value: dh,
                reason: "perturbed height must stay >= 0",
            });
        }
    }
    let ref_cfg = DropConfig {
        height: cfg.reference_height,
        ..*cfg
    };
    let (_, ref_summary) = simulate_drop(params, spec, &ref_cfg)?;
    let e_ref = ref_summary.e_dissipated;

    let mut points = Vec::with_capacity(delta_hs.len());
    for &dh in delta_hs {
        let cell_cfg = DropConfig {
            height: cfg.reference_height + dh,
            ..*cfg
        };
        let (_, summary) = simulate_drop(params, spec, &cell_cfg)?;
        points.push(SweepPoint {
            delta_h: dh,
            e_dissipated: summary.e_dissipated,
            delta_ed: energy::delta_ed(summary.e_dissipated, e_ref),
            full_rejection: energy::full_rejection(dh, params),
        });
    }
    Ok(DeltaHCurve {
        reference_height: cfg.reference_height,
        reference_e_d: e_ref,
        points,
    })
}

/// Evenly spaced grid of `n` points spanning [lo, hi] inclusive. The
/// endpoint-weighted form keeps the midpoint of a symmetric range exactly
/// zero.
pub fn even_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            lo * (1.0 - t) + hi * t
        })
        .collect()
}
