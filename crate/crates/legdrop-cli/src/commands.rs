//! Subcommand implementations. Each writes deterministic, plot-ready files
//! with the resolved configuration embedded for provenance, and prints a
//! one-line result to stdout.

use std::path::{Path, PathBuf};

use serde_json::json;

use legdrop_core::calibrate::{
    calibrate, even_grid, run_table2, sweep_delta_h, CoefficientSource, DampingMode,
    DampingTarget, Table2Options,
};
use legdrop_core::energy::{decompose_energy, loop_area, truncate_to_max_compression};
use legdrop_core::expdata::{
    align_trial, fit_settling_slope, load_channel, measured_workloop, moving_average, TimeSeries,
};
use legdrop_core::export;
use legdrop_core::sim::simulate_drop;
use legdrop_core::{Error, Result};

use crate::config::Resolved;

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    export::to_file(path, |out| {
        use std::io::Write;
        writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
        Ok(())
    })
}

pub struct SimulateArgs {
    pub out_dir: PathBuf,
    /// Also write 1 kHz force / 8 kHz hip-height channels.
    pub export_sensors: bool,
}

pub fn cmd_simulate(resolved: &Resolved, args: &SimulateArgs) -> Result<()> {
    let (traj, summary) = simulate_drop(&resolved.params, &resolved.damper, &resolved.drop)?;
    std::fs::create_dir_all(&args.out_dir)?;
    let note = [resolved.provenance_line()];

    export::to_file(args.out_dir.join("trajectory.csv"), |out| {
        export::write_trajectory_csv(out, &traj, &note)
    })?;
    let mut events = export::events_json(&traj);
    events["config"] = resolved.provenance_value();
    write_json(&args.out_dir.join("events.json"), &events)?;

    let summary_value = json!({
        "summary": summary,
        "config": resolved.provenance_value(),
    });
    write_json(&args.out_dir.join("summary.json"), &summary_value)?;

    if args.export_sensors {
        let (force, encoder) =
            export::sensor_channels(&traj, &resolved.params, 1000.0, 8000.0, 0.05)?;
        export::to_file(args.out_dir.join("force.csv"), |out| {
            export::write_channel_csv(out, &force, &note)
        })?;
        export::to_file(args.out_dir.join("encoder.csv"), |out| {
            export::write_channel_csv(out, &encoder, &note)
        })?;
    }

    println!(
        "h = {:.3} m  E_T = {:.1} mJ  E_D = {:.1} mJ  outcome = {}",
        resolved.drop.height,
        summary.e_total * 1e3,
        summary.e_dissipated * 1e3,
        summary.outcome.as_str()
    );
    Ok(())
}

pub struct Table2Args {
    /// Use the published coefficients instead of calibrating each set.
    pub paper_coefficients: bool,
    pub delta_h: f64,
    pub sets: Option<Vec<usize>>,
    pub out: PathBuf,
    pub json: bool,
}

pub fn cmd_table2(resolved: &Resolved, args: &Table2Args) -> Result<()> {
    let set_filter = match &args.sets {
        None => None,
        Some(list) => {
            let mut filter = [false; 5];
            for &s in list {
                if !(1..=5).contains(&s) {
                    return Err(Error::Invalid {
                        name: "sets",
                        value: s as f64,
                        reason: "set index must be 1..=5",
                    });
                }
                filter[s - 1] = true;
            }
            Some(filter)
        }
    };
    let options = Table2Options {
        source: if args.paper_coefficients {
            CoefficientSource::Published
        } else {
            CoefficientSource::Calibrated
        },
        delta_h: args.delta_h,
        set_filter,
    };
    let result = run_table2(&resolved.params, &resolved.drop, &options)?;

    if args.json {
        let mut value = export::table2_json(&result);
        value["config"] = resolved.provenance_value();
        write_json(&args.out, &value)?;
    } else {
        let note = [resolved.provenance_line()];
        export::to_file(&args.out, |out| {
            export::write_table2_csv(out, &result, &note)
        })?;
    }
    println!(
        "{} cells ({} coefficients) -> {}",
        result.cells.len(),
        if args.paper_coefficients {
            "published"
        } else {
            "calibrated"
        },
        args.out.display()
    );
    Ok(())
}

pub struct CalibrateArgs {
    pub target_mj: f64,
    pub mode: DampingMode,
    pub tol_mj: f64,
    pub bracket: Option<(f64, f64)>,
    pub out: Option<PathBuf>,
}

pub fn cmd_calibrate(resolved: &Resolved, args: &CalibrateArgs) -> Result<()> {
    let mut target = DampingTarget::new(args.target_mj * 1e-3, args.mode);
    target.tol = args.tol_mj * 1e-3;
    if let Some(bracket) = args.bracket {
        target.bracket = bracket;
    }
    let coefficient = calibrate(&resolved.params, &target, &resolved.drop)?;
    if let Some(path) = &args.out {
        let mut value = export::calibration_json(args.mode, target.e_target, coefficient);
        value["config"] = resolved.provenance_value();
        write_json(path, &value)?;
    }
    let unit = match args.mode {
        DampingMode::Viscous => "N s/m",
        DampingMode::Coulomb => "N",
    };
    println!(
        "{} target {:.1} mJ -> coefficient {:.4} {unit}",
        args.mode.as_str(),
        args.target_mj,
        coefficient
    );
    Ok(())
}

pub struct SweepArgs {
    pub range: (f64, f64, usize),
    pub out: PathBuf,
}

pub fn cmd_sweep(resolved: &Resolved, args: &SweepArgs) -> Result<()> {
    let (lo, hi, n) = args.range;
    let grid = even_grid(lo, hi, n);
    let curve = sweep_delta_h(&resolved.params, &resolved.damper, &resolved.drop, &grid)?;
    let note = [resolved.provenance_line()];
    export::to_file(&args.out, |out| export::write_sweep_csv(out, &curve, &note))?;
    println!(
        "{} points, reference E_D = {:.1} mJ -> {}",
        curve.points.len(),
        curve.reference_e_d * 1e3,
        args.out.display()
    );
    Ok(())
}

pub struct AnalyzeArgs {
    pub force: PathBuf,
    pub encoder: PathBuf,
    pub slow: Option<(PathBuf, PathBuf)>,
    pub impact_mj: f64,
    pub threshold: f64,
    pub force_span: usize,
    pub encoder_span: usize,
    pub out: PathBuf,
    pub workloop_csv: Option<PathBuf>,
}

fn load_filtered_pair(
    force_path: &Path,
    encoder_path: &Path,
    force_span: usize,
    encoder_span: usize,
) -> Result<(TimeSeries, TimeSeries)> {
    let mut force = load_channel(force_path, "F_N")?;
    let mut encoder = load_channel(encoder_path, "y_m")?;
    if force_span > 1 {
        force = moving_average(&force, force_span)?;
    }
    if encoder_span > 1 {
        encoder = moving_average(&encoder, encoder_span)?;
    }
    Ok((force, encoder))
}

pub fn cmd_analyze(resolved: &Resolved, args: &AnalyzeArgs) -> Result<()> {
    let l0 = resolved.params.resting_length();
    let (force, encoder) =
        load_filtered_pair(&args.force, &args.encoder, args.force_span, args.encoder_span)?;
    let aligned = align_trial(&force, &encoder, args.threshold)?;
    let free_loop = measured_workloop(&aligned, l0, args.threshold)?;
    let e_effective = loop_area(&free_loop)?.abs();

    let e_cfriction = match &args.slow {
        None => 0.0,
        Some((slow_force, slow_encoder)) => {
            let (sf, se) =
                load_filtered_pair(slow_force, slow_encoder, args.force_span, args.encoder_span)?;
            let slow_aligned = align_trial(&sf, &se, args.threshold)?;
            let slow_loop = measured_workloop(&slow_aligned, l0, args.threshold)?;
            let cut = truncate_to_max_compression(&slow_loop, &free_loop)?;
            loop_area(&cut)?.abs()
        }
    };

    let breakdown = decompose_energy(e_effective, e_cfriction, args.impact_mj * 1e-3);
    if breakdown.has_negative_component() {
        eprintln!(
            "warning: negative component in the energy breakdown (E_viscous = {:.1} mJ); \
             the measurements are inconsistent",
            breakdown.e_viscous * 1e3
        );
    }

    let value = json!({
        "breakdown": {
            "E_effective_J": breakdown.e_effective,
            "E_cfriction_J": breakdown.e_cfriction,
            "E_impact_J": breakdown.e_impact,
            "E_viscous_J": breakdown.e_viscous,
        },
        "inputs": {
            "force": args.force.display().to_string(),
            "encoder": args.encoder.display().to_string(),
            "threshold_N": args.threshold,
            "force_span": args.force_span,
            "encoder_span": args.encoder_span,
        },
        "config": resolved.provenance_value(),
    });
    write_json(&args.out, &value)?;

    if let Some(path) = &args.workloop_csv {
        let note = [resolved.provenance_line()];
        export::to_file(path, |out| {
            export::write_workloop_csv(out, &free_loop, &note)
        })?;
    }

    println!(
        "E_effective = {:.1} mJ  E_cfriction = {:.1} mJ  E_impact = {:.1} mJ  E_viscous = {:.1} mJ",
        breakdown.e_effective * 1e3,
        breakdown.e_cfriction * 1e3,
        breakdown.e_impact * 1e3,
        breakdown.e_viscous * 1e3
    );
    Ok(())
}

pub struct CharacterizeArgs {
    pub force: PathBuf,
    pub velocity: PathBuf,
    pub window: (f64, f64),
    pub force_span: usize,
    pub out: PathBuf,
}

pub fn cmd_characterize(resolved: &Resolved, args: &CharacterizeArgs) -> Result<()> {
    let mut force = load_channel(&args.force, "F_N")?;
    if args.force_span > 1 {
        force = moving_average(&force, args.force_span)?;
    }
    let velocity = load_channel(&args.velocity, "v_mps")?;
    let fit = fit_settling_slope(&force, &velocity, args.window)?;
    let value = json!({
        "fit": fit,
        "inputs": {
            "force": args.force.display().to_string(),
            "velocity": args.velocity.display().to_string(),
            "force_span": args.force_span,
        },
        "config": resolved.provenance_value(),
    });
    write_json(&args.out, &value)?;
    println!(
        "damping rate = {:.1} N s/m  offset = {:.2} N  rms = {:.3} N  work = {:.1} mJ ({} points)",
        fit.rate,
        fit.coulomb_offset,
        fit.residual_rms,
        fit.work * 1e3,
        fit.n_points
    );
    Ok(())
}

