//! Plot-ready CSV/JSON emission and sensor-rate channel synthesis.
//!
//! All CSV writers print floats with Rust's shortest round-trip formatting,
//! so exported numbers re-ingest losslessly. Writers accept optional `#`
//! comment lines for provenance headers; the channel parser skips them.

use std::io::Write;
use std::path::Path;

use serde_json::json;

use crate::calibrate::{DampingMode, DeltaHCurve, SweepResult};
use crate::energy::WorkLoop;
use crate::error::Result;
use crate::expdata::{Envelope, TimeSeries};
use crate::params::LegParams;
use crate::sim::SimTrajectory;

fn write_comments(out: &mut impl Write, comments: &[String]) -> Result<()> {
    for line in comments {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

/// Trajectory CSV: `t,y,ydot,beta,betadot,F_leg,tau_d,phase`, SI units.
pub fn write_trajectory_csv(
    out: &mut impl Write,
    traj: &SimTrajectory,
    comments: &[String],
) -> Result<()> {
    write_comments(out, comments)?;
    writeln!(out, "t,y,ydot,beta,betadot,F_leg,tau_d,phase")?;
    for s in &traj.samples {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            s.t,
            s.y,
            s.ydot,
            s.beta,
            s.betadot,
            s.force,
            s.tau_d,
            s.phase.as_str()
        )?;
    }
    Ok(())
}

/// Event log as a JSON sidecar value.
pub fn events_json(traj: &SimTrajectory) -> serde_json::Value {
    json!({
        "events": traj.events.iter().map(|e| {
            json!({ "kind": e.kind, "t_s": e.t })
        }).collect::<Vec<_>>()
    })
}

/// Work-loop CSV: `leg_length_m,force_N`, ordered by time.
pub fn write_workloop_csv(
    out: &mut impl Write,
    workloop: &WorkLoop,
    comments: &[String],
) -> Result<()> {
    write_comments(out, comments)?;
    writeln!(out, "leg_length_m,force_N")?;
    for (l, f) in workloop.samples() {
        writeln!(out, "{l},{f}")?;
    }
    Ok(())
}

/// Envelope CSV: `t,mean,lo,hi`.
pub fn write_envelope_csv(
    out: &mut impl Write,
    envelope: &Envelope,
    comments: &[String],
) -> Result<()> {
    write_comments(out, comments)?;
    writeln!(out, "t,mean,lo,hi")?;
    for i in 0..envelope.time.len() {
        let m = envelope.mean[i];
        let b = envelope.band[i];
        writeln!(out, "{},{},{},{}", envelope.time[i], m, m - b, m + b)?;
    }
    Ok(())
}

/// Sensor channel CSV: `t_s,<channel>`, the schema `load_channel` ingests.
pub fn write_channel_csv(
    out: &mut impl Write,
    series: &TimeSeries,
    comments: &[String],
) -> Result<()> {
    write_comments(out, comments)?;
    writeln!(out, "t_s,{}", series.name)?;
    for (t, v) in series.times().iter().zip(series.values()) {
        writeln!(out, "{t},{v}")?;
    }
    Ok(())
}

/// Convenience file wrapper around the stream writers.
pub fn to_file<F>(path: impl AsRef<Path>, write: F) -> Result<()>
where
    F: FnOnce(&mut std::io::BufWriter<std::fs::File>) -> Result<()>,
{
    let file = std::fs::File::create(path)?;
    let mut out = std::io::BufWriter::new(file);
    write(&mut out)?;
    out.flush()?;
    Ok(())
}

/// Resample a simulated drop onto uniform sensor grids: the force channel
/// (`F_N`) and the hip-height channel (`y_m`), at the given rates \[Hz\].
/// Mimics what the bench force plate and linear encoder would have
/// recorded for this drop, including `tail` seconds past the end of the
/// trajectory (ballistic rebound after a lift-off, held state otherwise).
pub fn sensor_channels(
    traj: &SimTrajectory,
    params: &LegParams,
    force_rate: f64,
    encoder_rate: f64,
    tail: f64,
) -> Result<(TimeSeries, TimeSeries)> {
    let mut times: Vec<f64> = traj.samples.iter().map(|s| s.t).collect();
    let mut forces: Vec<f64> = traj.samples.iter().map(|s| s.force).collect();
    let mut heights: Vec<f64> = traj.samples.iter().map(|s| s.y).collect();

    if tail > 0.0 {
        let last = *traj.samples.last().ok_or_else(|| {
            crate::error::Error::Degenerate("trajectory has no samples".into())
        })?;
        let lifted_off = traj
            .events
            .last()
            .map(|e| e.kind == crate::sim::EventKind::LiftOff)
            .unwrap_or(false);
        let dt = 1.0 / encoder_rate.max(force_rate);
        let n_tail = (tail / dt).ceil() as usize;
        for i in 1..=n_tail {
            let s = i as f64 * dt;
            times.push(last.t + s);
            forces.push(if lifted_off { 0.0 } else { last.force });
            heights.push(if lifted_off {
                last.y + last.ydot * s - 0.5 * params.gravity * s * s
            } else {
                last.y
            });
        }
    }

    let force_src = TimeSeries::new("F_N", times.clone(), forces)?;
    let height_src = TimeSeries::new("y_m", times, heights)?;
    Ok((
        antialiased_resample(&force_src, force_rate)?,
        antialiased_resample(&height_src, encoder_rate)?,
    ))
}

/// Downsample through a two-sample-wide box average, the way a real DAQ
/// front-end band-limits before sampling. Point-sampling a force step would
/// alias its work integral by up to half a sample of impulse.
fn antialiased_resample(src: &TimeSeries, rate: f64) -> Result<TimeSeries> {
    let dt = 1.0 / rate;
    let window = 2.0 * dt;

    // Cumulative trapezoidal integral of the source at its breakpoints.
    let st = src.times();
    let sv = src.values();
    let mut cumulative = Vec::with_capacity(st.len());
    let mut acc = 0.0;
    cumulative.push(0.0);
    for i in 1..st.len() {
        acc += 0.5 * (sv[i - 1] + sv[i]) * (st[i] - st[i - 1]);
        cumulative.push(acc);
    }
    let integral_at = |t: f64| -> f64 {
        if t <= st[0] {
            return cumulative[0] + sv[0] * (t - st[0]);
        }
        if t >= st[st.len() - 1] {
            return cumulative[st.len() - 1] + sv[st.len() - 1] * (t - st[st.len() - 1]);
        }
        let i = st.partition_point(|&probe| probe <= t);
        let (t0, t1) = (st[i - 1], st[i]);
        let frac = (t - t0) / (t1 - t0);
        // Quadratic segment of the trapezoid integral.
        let seg = 0.5 * (sv[i - 1] * (2.0 - frac) + sv[i] * frac) * frac * (t1 - t0);
        cumulative[i - 1] + seg
    };

    let n = ((src.end() - src.start()) / dt).floor() as usize + 1;
    let times: Vec<f64> = (0..n).map(|i| src.start() + i as f64 * dt).collect();
    let values: Vec<f64> = times
        .iter()
        .map(|&t| (integral_at(t + 0.5 * window) - integral_at(t - 0.5 * window)) / window)
        .collect();
    TimeSeries::new(src.name.clone(), times, values)
}

/// Sweep-grid CSV: one row per cell.
pub fn write_table2_csv(
    out: &mut impl Write,
    result: &SweepResult,
    comments: &[String],
) -> Result<()> {
    write_comments(out, comments)?;
    writeln!(
        out,
        "set,mode,coefficient,height_m,condition,e_dissipated_J,delta_ed_J,ratio"
    )?;
    for c in &result.cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            c.set,
            c.mode.as_str(),
            c.coefficient,
            c.height,
            c.condition.as_str(),
            c.e_dissipated,
            c.delta_ed,
            c.ratio
        )?;
    }
    Ok(())
}

/// Sweep grid as JSON nested by set, then damping mode.
pub fn table2_json(result: &SweepResult) -> serde_json::Value {
    let mut sets = serde_json::Map::new();
    for c in &result.cells {
        let set_entry = sets
            .entry(format!("set{}", c.set))
            .or_insert_with(|| json!({}));
        let mode_key = c.mode.as_str();
        let obj = set_entry.as_object_mut().unwrap();
        let mode_entry = obj.entry(mode_key).or_insert_with(|| {
            json!({ "coefficient": c.coefficient, "cells": [] })
        });
        mode_entry["cells"].as_array_mut().unwrap().push(json!({
            "condition": c.condition.as_str(),
            "height_m": c.height,
            "e_dissipated_J": c.e_dissipated,
            "delta_ed_J": c.delta_ed,
            "ratio": c.ratio,
        }));
    }
    json!({
        "reference_height_m": result.reference_height,
        "delta_h_m": result.delta_h,
        "sets": serde_json::Value::Object(sets),
    })
}

/// Perturbation-sweep CSV: one row per delta-h point, with the
/// full-rejection line attached as its own column.
pub fn write_sweep_csv(
    out: &mut impl Write,
    curve: &DeltaHCurve,
    comments: &[String],
) -> Result<()> {
    write_comments(out, comments)?;
    writeln!(
        out,
        "delta_h_m,e_dissipated_J,delta_ed_J,full_rejection_J"
    )?;
    for p in &curve.points {
        writeln!(
            out,
            "{},{},{},{}",
            p.delta_h, p.e_dissipated, p.delta_ed, p.full_rejection
        )?;
    }
    Ok(())
}

/// Calibration result as JSON.
pub fn calibration_json(mode: DampingMode, target_j: f64, coefficient: f64) -> serde_json::Value {
    json!({
        "mode": mode.as_str(),
        "target_J": target_j,
        "coefficient": coefficient,
        "unit": match mode {
            DampingMode::Viscous => "N s/m",
            DampingMode::Coulomb => "N",
        },
    })
}
