//! Drop-bench sensor processing: channel ingestion, filtering, trial
//! alignment, envelopes, measured work loops, damper characterization.
//!
//! Channels arrive as two-column CSV (`t_s,<channel>`), typically a force
//! plate around 1 kHz and a linear encoder around 8 kHz. Trials are
//! aligned on the force channel's touch-down, force is interpolated onto
//! the finer encoder base, and the stance window between threshold
//! crossings yields the measured work loop.

use std::io::BufRead;
use std::path::Path;

use crate::energy::WorkLoop;
use crate::error::{Error, Result};
use crate::fit::{fit_line, LineFit};

/// One sampled sensor channel. Times are strictly increasing and values
/// finite; both are enforced at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub name: String,
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(name: impl Into<String>, times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if times.is_empty() {
            return Err(Error::Degenerate(format!("channel {name} is empty")));
        }
        if times.len() != values.len() {
            return Err(Error::Degenerate(format!(
                "channel {name}: {} times vs {} values",
                times.len(),
                values.len()
            )));
        }
        for pair in times.windows(2) {
            if !(pair[1] > pair[0]) {
                return Err(Error::Degenerate(format!(
                    "channel {name}: timestamps not strictly increasing near t = {}",
                    pair[0]
                )));
            }
        }
        if times.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Degenerate(format!(
                "channel {name} contains non-finite samples"
            )));
        }
        Ok(TimeSeries {
            name,
            times,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Mean sampling rate over the record \[Hz\].
    pub fn nominal_rate(&self) -> f64 {
        if self.times.len() < 2 {
            return 0.0;
        }
        (self.times.len() - 1) as f64 / (self.end() - self.start())
    }

    /// Linear interpolation at time `t`; ends are clamped.
    pub fn value_at(&self, t: f64) -> f64 {
        if t <= self.start() {
            return self.values[0];
        }
        if t >= self.end() {
            return *self.values.last().unwrap();
        }
        let i = match self
            .times
            .binary_search_by(|probe| probe.partial_cmp(&t).unwrap())
        {
            Ok(exact) => return self.values[exact],
            Err(i) => i,
        };
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    /// Same channel with all timestamps moved by `dt`.
    pub fn shifted(&self, dt: f64) -> TimeSeries {
        TimeSeries {
            name: self.name.clone(),
            times: self.times.iter().map(|t| t + dt).collect(),
            values: self.values.clone(),
        }
    }
}

/// Parse a two-column channel CSV: header `t_s,<channel>`, one sample per
/// line, `#` lines ignored. `line` in errors is 1-based over the raw file.
pub fn parse_channel<R: BufRead>(reader: R, path: &str, channel: &str) -> Result<TimeSeries> {
    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut saw_header = false;
    let expected_header = format!("t_s,{channel}");

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            path: path.into(),
            line: line_no,
            reason: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !saw_header {
            if trimmed != expected_header {
                return Err(Error::Parse {
                    path: path.into(),
                    line: line_no,
                    reason: format!("expected header '{expected_header}', found '{trimmed}'"),
                });
            }
            saw_header = true;
            continue;
        }
        let mut fields = trimmed.split(',');
        let (t_str, v_str) = match (fields.next(), fields.next(), fields.next()) {
            (Some(t), Some(v), None) => (t, v),
            _ => {
                return Err(Error::Parse {
                    path: path.into(),
                    line: line_no,
                    reason: "expected exactly 2 comma-separated fields".into(),
                })
            }
        };
        let t: f64 = t_str.trim().parse().map_err(|_| Error::Parse {
            path: path.into(),
            line: line_no,
            reason: format!("bad timestamp '{t_str}'"),
        })?;
        let v: f64 = v_str.trim().parse().map_err(|_| Error::Parse {
            path: path.into(),
            line: line_no,
            reason: format!("bad value '{v_str}'"),
        })?;
        if !t.is_finite() || !v.is_finite() {
            return Err(Error::Parse {
                path: path.into(),
                line: line_no,
                reason: "non-finite sample".into(),
            });
        }
        if let Some(&prev) = times.last() {
            if t <= prev {
                return Err(Error::Parse {
                    path: path.into(),
                    line: line_no,
                    reason: format!("timestamp {t} not after previous {prev}"),
                });
            }
        }
        times.push(t);
        values.push(v);
    }

    if !saw_header {
        return Err(Error::Parse {
            path: path.into(),
            line: 1,
            reason: "missing header".into(),
        });
    }
    TimeSeries::new(channel, times, values)
}

/// Load a sensor channel from a CSV file.
pub fn load_channel(path: impl AsRef<Path>, channel: &str) -> Result<TimeSeries> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    parse_channel(
        std::io::BufReader::new(file),
        &path.display().to_string(),
        channel,
    )
}

/// Centered moving average with an odd span. Edges use shrinking windows,
/// so the output length equals the input length.
pub fn moving_average(series: &TimeSeries, span: usize) -> Result<TimeSeries> {
    if span == 0 || span.is_multiple_of(2) {
        return Err(Error::Invalid {
            name: "span",
            value: span as f64,
            reason: "filter span must be odd and >= 1",
        });
    }
    if span > series.len() {
        return Err(Error::Invalid {
            name: "span",
            value: span as f64,
            reason: "filter span exceeds series length",
        });
    }
    let half = span / 2;
    let v = series.values();
    let n = v.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let lo = i.saturating_sub(half);
        let hi = (i + half + 1).min(n);
        let sum: f64 = v[lo..hi].iter().sum();
        out.push(sum / (hi - lo) as f64);
    }
    TimeSeries::new(series.name.clone(), series.times().to_vec(), out)
}

/// A force/position trial on a single time base with touch-down at t = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedTrial {
    /// Encoder time base, shifted so touch-down is t = 0 \[s\].
    pub time: Vec<f64>,
    /// Force interpolated onto the encoder base \[N\].
    pub force: Vec<f64>,
    /// Hip height from the encoder \[m\].
    pub height: Vec<f64>,
}

/// Time of the first upward crossing of `threshold` on the channel,
/// linearly interpolated between the bracketing samples.
pub fn first_upward_crossing(series: &TimeSeries, threshold: f64) -> Option<f64> {
    let t = series.times();
    let v = series.values();
    if v[0] >= threshold {
        return Some(t[0]);
    }
    for i in 1..v.len() {
        if v[i - 1] < threshold && v[i] >= threshold {
            let frac = (threshold - v[i - 1]) / (v[i] - v[i - 1]);
            return Some(t[i - 1] + frac * (t[i] - t[i - 1]));
        }
    }
    None
}

/// Align a force/encoder pair: locate touch-down as the first upward
/// crossing of `threshold` on the force channel, shift both channels so it
/// sits at t = 0, and interpolate force onto the (finer) encoder base over
/// the overlap of the two records.
pub fn align_trial(
    force: &TimeSeries,
    encoder: &TimeSeries,
    threshold: f64,
) -> Result<AlignedTrial> {
    let t_td = first_upward_crossing(force, threshold).ok_or_else(|| {
        Error::Alignment(format!(
            "force never crosses the {threshold} N touch-down threshold (max {:.3} N)",
            force.values().iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
        ))
    })?;

    let lo = force.start().max(encoder.start());
    let hi = force.end().min(encoder.end());
    if !(hi > lo) {
        return Err(Error::Alignment(
            "force and encoder records do not overlap in time".into(),
        ));
    }

    let mut time = Vec::new();
    let mut f = Vec::new();
    let mut y = Vec::new();
    for (&t, &h) in encoder.times().iter().zip(encoder.values()) {
        if t < lo || t > hi {
            continue;
        }
        time.push(t - t_td);
        f.push(force.value_at(t));
        y.push(h);
    }
    if time.len() < 2 {
        return Err(Error::Alignment(
            "overlap contains fewer than 2 encoder samples".into(),
        ));
    }
    Ok(AlignedTrial {
        time,
        force: f,
        height: y,
    })
}

/// Mean curve and pointwise dispersion band of repeated trials.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub time: Vec<f64>,
    pub mean: Vec<f64>,
    /// Band half-width: multiplier times the pointwise population standard
    /// deviation.
    pub band: Vec<f64>,
}

impl Envelope {
    pub fn lower(&self) -> Vec<f64> {
        self.mean.iter().zip(&self.band).map(|(m, b)| m - b).collect()
    }

    pub fn upper(&self) -> Vec<f64> {
        self.mean.iter().zip(&self.band).map(|(m, b)| m + b).collect()
    }
}

/// Aggregate >= 2 trials into mean +- multiplier * std on a common base:
/// the first trial's time grid restricted to the span covered by every
/// trial. Standard deviation uses the population convention (divide by N).
pub fn trial_envelope(trials: &[TimeSeries], multiplier: f64) -> Result<Envelope> {
    if trials.len() < 2 {
        return Err(Error::Degenerate(format!(
            "envelope needs at least 2 trials, got {}",
            trials.len()
        )));
    }
    if !(multiplier >= 0.0) || !multiplier.is_finite() {
        return Err(Error::Invalid {
            name: "multiplier",
            value: multiplier,
            reason: "band multiplier must be >= 0",
        });
    }
    let lo = trials.iter().map(|t| t.start()).fold(f64::NEG_INFINITY, f64::max);
    let hi = trials.iter().map(|t| t.end()).fold(f64::INFINITY, f64::min);
    if !(hi > lo) {
        return Err(Error::Alignment("trials do not overlap in time".into()));
    }

    let time: Vec<f64> = trials[0]
        .times()
        .iter()
        .copied()
        .filter(|&t| t >= lo && t <= hi)
        .collect();
    if time.is_empty() {
        return Err(Error::Alignment(
            "no common samples inside the trial overlap".into(),
        ));
    }
    let n = trials.len() as f64;
    let mut mean = Vec::with_capacity(time.len());
    let mut band = Vec::with_capacity(time.len());
    for &t in &time {
        let mut m = 0.0;
        for trial in trials {
            m += trial.value_at(t);
        }
        m /= n;
        let mut var = 0.0;
        for trial in trials {
            let d = trial.value_at(t) - m;
            var += d * d;
        }
        mean.push(m);
        band.push(multiplier * (var / n).sqrt());
    }
    Ok(Envelope { time, mean, band })
}

/// Work loop of a measured stance: (hip height, force) between the
/// touch-down and lift-off threshold crossings. Samples marginally above
/// the resting length `l0` are kept: band-limited sensors smear the impact
/// step backwards in time, and that leading ramp carries real loop area.
/// `l0` gates a plausibility check instead: a stance that never compresses
/// below the resting length means the channels are mispaired.
pub fn measured_workloop(trial: &AlignedTrial, l0: f64, threshold: f64) -> Result<WorkLoop> {
    let start = trial
        .force
        .iter()
        .position(|&f| f >= threshold)
        .ok_or_else(|| Error::Window("no stance: force never reaches the threshold".into()))?;
    let rel_end = trial.force[start..]
        .iter()
        .position(|&f| f < threshold)
        .ok_or_else(|| Error::Window("lift-off never detected: force stays loaded".into()))?;
    let end = start + rel_end;

    let samples: Vec<(f64, f64)> = (start..end)
        .map(|i| (trial.height[i], trial.force[i]))
        .collect();
    if samples.len() < 3 {
        return Err(Error::Window(format!(
            "stance window too short: {} usable samples",
            samples.len()
        )));
    }
    if !samples.iter().any(|&(h, _)| h < l0) {
        return Err(Error::Window(
            "stance never compresses below the resting leg length".into(),
        ));
    }
    WorkLoop::new(samples)
}

/// Damping-rate estimate from an isolated damper drop.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DamperFit {
    /// Least-squares slope of force against speed \[N s/m\].
    pub rate: f64,
    /// Fit intercept: speed-independent, Coulomb-like force offset \[N\].
    pub coulomb_offset: f64,
    /// Speed interval the fit used \[m/s\].
    pub window: (f64, f64),
    /// RMS force residual of the fit \[N\].
    pub residual_rms: f64,
    /// Trapezoidal integral of F * v over the whole record \[J\].
    pub work: f64,
    pub n_points: usize,
}

/// Least-squares damping rate on the settling branch: force samples after
/// the force peak whose speed lies inside `window` are regressed against
/// speed. The velocity channel is interpolated onto the force time base.
pub fn fit_settling_slope(
    force: &TimeSeries,
    velocity: &TimeSeries,
    window: (f64, f64),
) -> Result<DamperFit> {
    if !(window.1 > window.0) {
        return Err(Error::Invalid {
            name: "window",
            value: window.0,
            reason: "speed window must satisfy lo < hi",
        });
    }
    let peak = force
        .values()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);

    let mut speeds = Vec::new();
    let mut forces = Vec::new();
    let mut work = 0.0;
    let mut prev: Option<(f64, f64, f64)> = None;
    for (i, (&t, &f)) in force.times().iter().zip(force.values()).enumerate() {
        let v = velocity.value_at(t);
        if let Some((t0, f0, v0)) = prev {
            work += 0.5 * (f0 * v0 + f * v) * (t - t0);
        }
        prev = Some((t, f, v));
        if i > peak && v >= window.0 && v <= window.1 {
            speeds.push(v);
            forces.push(f);
        }
    }
    if speeds.len() < 10 {
        return Err(Error::Window(format!(
            "settling fit needs >= 10 points in the speed window, found {}",
            speeds.len()
        )));
    }
    let LineFit {
        slope,
        intercept,
        residual_rms,
        n,
        ..
    } = fit_line(&speeds, &forces)?;
    Ok(DamperFit {
        rate: slope,
        coulomb_offset: intercept,
        window,
        residual_rms,
        work,
        n_points: n,
    })
}

/// Cumulative impulse of a force record: running trapezoidal integral of
/// F dt from the first sample.
pub fn impulse(force: &TimeSeries) -> TimeSeries {
    let t = force.times();
    let v = force.values();
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(v.len());
    out.push(0.0);
    for i in 1..v.len() {
        acc += 0.5 * (v[i - 1] + v[i]) * (t[i] - t[i - 1]);
        out.push(acc);
    }
    TimeSeries {
        name: format!("{}_impulse", force.name),
        times: t.to_vec(),
        values: out,
    }
}
