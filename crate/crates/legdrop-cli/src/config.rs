//! Flag/config-file resolution into validated model parameters.
//!
//! Every numeric model field can come from an optional JSON config file
//! and/or a command-line flag; flags win on conflict. Angles enter in
//! degrees only through explicitly `-deg`-suffixed inputs. The fully
//! resolved configuration is serialized into every output file for
//! provenance.

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;

use legdrop_core::params::{DamperSpec, LegParams};
use legdrop_core::sim::{DropConfig, SolverSettings};
use legdrop_core::{Error, Result};

/// Model overrides shared by all subcommands.
#[derive(Debug, Clone, Args)]
pub struct CommonOpts {
    /// JSON config file with the same fields as the flags; flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<std::path::PathBuf>,

    /// Body mass [kg].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mass: Option<f64>,
    /// Upper segment length [m].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda1: Option<f64>,
    /// Lower segment length [m].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda2: Option<f64>,
    /// Knee spring stiffness [N/m].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub stiffness: Option<f64>,
    /// Spring lever arm [m].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lever_spring: Option<f64>,
    /// Damper lever arm [m].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lever_damper: Option<f64>,
    /// Knee resting angle [deg].
    #[arg(long = "beta0-deg", global = true, allow_negative_numbers = true)]
    pub beta0_deg: Option<f64>,
    /// Gravitational acceleration [m/s^2].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gravity: Option<f64>,

    /// Viscous damping coefficient d_v [N s/m].
    #[arg(long = "dv", global = true, allow_negative_numbers = true)]
    pub viscous: Option<f64>,
    /// Coulomb damping coefficient d_c [N].
    #[arg(long = "dc", global = true, allow_negative_numbers = true)]
    pub coulomb: Option<f64>,
    /// Damper velocity deadband [rad/s].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub deadband: Option<f64>,

    /// Drop height (foot clearance at release) [m].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub height: Option<f64>,
    /// Reference drop height h0 [m].
    #[arg(long = "h0", global = true, allow_negative_numbers = true)]
    pub reference_height: Option<f64>,
    /// Integrator absolute tolerance.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub abs_tol: Option<f64>,
    /// Integrator relative tolerance.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub rel_tol: Option<f64>,
    /// Integrator maximum step [s].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub max_step: Option<f64>,
    /// Simulated-time budget for one stance [s].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub max_sim_time: Option<f64>,
    /// Settle detector speed threshold [m/s].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub settle_speed_eps: Option<f64>,
    /// Settle detector quiet duration [s].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub settle_duration: Option<f64>,
    /// Bottom-out knee angle [deg].
    #[arg(long = "beta-min-deg", global = true, allow_negative_numbers = true)]
    pub beta_min_deg: Option<f64>,
}

/// JSON config file schema. Unknown keys anywhere are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub params: ParamsSection,
    #[serde(default)]
    pub damper: DamperSection,
    #[serde(default)]
    pub drop: DropSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub mass: Option<f64>,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub stiffness: Option<f64>,
    pub lever_spring: Option<f64>,
    pub lever_damper: Option<f64>,
    pub beta0_deg: Option<f64>,
    pub gravity: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DamperSection {
    pub viscous: Option<f64>,
    pub coulomb: Option<f64>,
    pub deadband: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DropSection {
    pub height: Option<f64>,
    pub reference_height: Option<f64>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_step: Option<f64>,
    pub max_sim_time: Option<f64>,
    pub settle_speed_eps: Option<f64>,
    pub settle_duration: Option<f64>,
    pub beta_min_deg: Option<f64>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub params: LegParams,
    pub damper: DamperSpec,
    pub drop: DropConfig,
}

impl Resolved {
    /// Single-line JSON for `#`-comment provenance headers.
    pub fn provenance_line(&self) -> String {
        format!("config: {}", serde_json::to_string(self).unwrap())
    }

    pub fn provenance_value(&self) -> serde_json::Value {
        json!(self)
    }
}

fn pick(flag: Option<f64>, file: Option<f64>, fallback: f64) -> f64 {
    flag.or(file).unwrap_or(fallback)
}

pub fn resolve(opts: &CommonOpts) -> Result<Resolved> {
    let file: ConfigFile = match &opts.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text).map_err(|e| Error::Parse {
                path: path.display().to_string(),
                line: e.line(),
                reason: e.to_string(),
            })?
        }
        None => ConfigFile::default(),
    };

    let dp = LegParams::default();
    let params = LegParams {
        mass: pick(opts.mass, file.params.mass, dp.mass),
        lambda1: pick(opts.lambda1, file.params.lambda1, dp.lambda1),
        lambda2: pick(opts.lambda2, file.params.lambda2, dp.lambda2),
        stiffness: pick(opts.stiffness, file.params.stiffness, dp.stiffness),
        lever_spring: pick(opts.lever_spring, file.params.lever_spring, dp.lever_spring),
        lever_damper: pick(opts.lever_damper, file.params.lever_damper, dp.lever_damper),
        beta0: pick(
            opts.beta0_deg.map(f64::to_radians),
            file.params.beta0_deg.map(f64::to_radians),
            dp.beta0,
        ),
        gravity: pick(opts.gravity, file.params.gravity, dp.gravity),
    };

    let dd = DamperSpec::default();
    let damper = DamperSpec {
        viscous: pick(opts.viscous, file.damper.viscous, dd.viscous),
        coulomb: pick(opts.coulomb, file.damper.coulomb, dd.coulomb),
        deadband: pick(opts.deadband, file.damper.deadband, dd.deadband),
    };

    let ds = SolverSettings::default();
    let dc = DropConfig::default();
    let drop = DropConfig {
        height: pick(opts.height, file.drop.height, dc.height),
        reference_height: pick(
            opts.reference_height,
            file.drop.reference_height,
            dc.reference_height,
        ),
        solver: SolverSettings {
            abs_tol: pick(opts.abs_tol, file.drop.abs_tol, ds.abs_tol),
            rel_tol: pick(opts.rel_tol, file.drop.rel_tol, ds.rel_tol),
            max_step: pick(opts.max_step, file.drop.max_step, ds.max_step),
            max_sim_time: pick(opts.max_sim_time, file.drop.max_sim_time, ds.max_sim_time),
            settle_speed_eps: pick(
                opts.settle_speed_eps,
                file.drop.settle_speed_eps,
                ds.settle_speed_eps,
            ),
            settle_duration: pick(
                opts.settle_duration,
                file.drop.settle_duration,
                ds.settle_duration,
            ),
            beta_min: pick(
                opts.beta_min_deg.map(f64::to_radians),
                file.drop.beta_min_deg.map(f64::to_radians),
                ds.beta_min,
            ),
        },
    };

    params.validate()?;
    damper.validate()?;
    drop.validate(&params)?;
    Ok(Resolved {
        params,
        damper,
        drop,
    })
}

/// Parse "lo:hi:n" into an inclusive grid specification.
pub fn parse_range(text: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Degenerate(format!(
            "range '{text}' must look like lo:hi:n"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::Degenerate(format!("bad range start '{}'", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Degenerate(format!("bad range end '{}'", parts[1])))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| Error::Degenerate(format!("bad range count '{}'", parts[2])))?;
    if n == 0 || !(hi >= lo) {
        return Err(Error::Degenerate(format!("empty range '{text}'")));
    }
    Ok((lo, hi, n))
}

/// Parse "lo:hi" into an interval.
pub fn parse_interval(text: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(Error::Degenerate(format!(
            "interval '{text}' must look like lo:hi"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::Degenerate(format!("bad interval start '{}'", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Degenerate(format!("bad interval end '{}'", parts[1])))?;
    if !(hi > lo) {
        return Err(Error::Degenerate(format!("empty interval '{text}'")));
    }
    Ok((lo, hi))
}
