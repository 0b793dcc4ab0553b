// Validation checks use `!(x > y)` so that NaN inputs fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Flag help strings carry unit brackets like [kg] that rustdoc would
// misread as links; escaping them would leak into --help output.
#![allow(rustdoc::broken_intra_doc_links)]

//! Command-line front end: drop simulation, dissipation grids, coefficient
//! calibration, perturbation sweeps, and bench-data analysis.
//!
//! Exit codes: 0 success, 1 input/validation error, 2 numerical failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use legdrop_core::calibrate::DampingMode;

use commands::*;
use config::{parse_interval, parse_range, resolve, CommonOpts};

#[derive(Parser)]
#[command(
    name = "legdrop",
    about = "Drop-test simulation and energy analysis for a damped two-segment leg",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Viscous,
    Coulomb,
}

impl From<ModeArg> for DampingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Viscous => DampingMode::Viscous,
            ModeArg::Coulomb => DampingMode::Coulomb,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one drop; writes trajectory.csv, summary.json, events.json.
    Simulate {
        /// Output directory.
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        /// Also write bench-style force.csv (1 kHz) and encoder.csv (8 kHz).
        #[arg(long)]
        export_sensors: bool,
    },
    /// Run the 5-set x 2-mode x 3-height dissipation grid.
    Table2 {
        /// Use the published damping coefficients as-is.
        #[arg(long, conflicts_with = "calibrate_coefficients")]
        paper_coefficients: bool,
        /// Calibrate each set's coefficient to its dissipation level first
        /// (the default).
        #[arg(long)]
        calibrate_coefficients: bool,
        /// Height perturbation of the step rows [m].
        #[arg(long, default_value_t = 0.025, allow_negative_numbers = true)]
        dh: f64,
        /// Restrict to these sets, e.g. --sets 1,3,5.
        #[arg(long, value_delimiter = ',')]
        sets: Option<Vec<usize>>,
        /// Output file.
        #[arg(long, default_value = "table2.csv")]
        out: PathBuf,
        /// Emit JSON nested by set/mode instead of CSV.
        #[arg(long)]
        json: bool,
    },
    /// Find the damping coefficient for a target reference-height
    /// dissipation.
    Calibrate {
        /// Target dissipated energy at the reference height [mJ].
        #[arg(long, allow_negative_numbers = true)]
        target_mj: f64,
        /// Damping law to calibrate.
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Accepted residual [mJ].
        #[arg(long, default_value_t = 0.5)]
        tol_mj: f64,
        /// Coefficient search bracket, "lo:hi".
        #[arg(long, allow_hyphen_values = true)]
        bracket: Option<String>,
        /// Optional JSON output file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the drop-height perturbation and record the dissipation
    /// change.
    Sweep {
        /// Perturbation grid "lo:hi:n" in meters, e.g. -0.025:0.025:21.
        #[arg(long, default_value = "-0.025:0.025:21", allow_hyphen_values = true)]
        dh_range: String,
        /// Output CSV.
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
    },
    /// Work-loop and energy-decomposition analysis of recorded channels.
    Analyze {
        /// Free-drop force channel CSV (t_s,F_N).
        #[arg(long)]
        force: PathBuf,
        /// Free-drop encoder channel CSV (t_s,y_m).
        #[arg(long)]
        encoder: PathBuf,
        /// Slow-drop pair "force.csv,encoder.csv" for the Coulomb-friction
        /// loop.
        #[arg(long, value_delimiter = ',')]
        slow: Option<Vec<PathBuf>>,
        /// Impact loss measured in the spring-only condition [mJ].
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        impact_mj: f64,
        /// Touch-down force threshold [N].
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        threshold: f64,
        /// Moving-average span for the force channel (odd; 1 disables).
        #[arg(long, default_value_t = 201)]
        force_span: usize,
        /// Moving-average span for the encoder channel (odd; 1 disables).
        #[arg(long, default_value_t = 35)]
        encoder_span: usize,
        /// Breakdown JSON output.
        #[arg(long, default_value = "breakdown.json")]
        out: PathBuf,
        /// Optional work-loop CSV of the free drop.
        #[arg(long)]
        workloop_csv: Option<PathBuf>,
    },
    /// Least-squares damping-rate fit of an isolated damper drop.
    Characterize {
        /// Force channel CSV (t_s,F_N).
        #[arg(long)]
        force: PathBuf,
        /// Piston-speed channel CSV (t_s,v_mps).
        #[arg(long)]
        velocity: PathBuf,
        /// Settling-branch speed window "lo:hi" [m/s].
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// Moving-average span for the force channel (odd; 1 disables).
        #[arg(long, default_value_t = 1)]
        force_span: usize,
        /// Fit JSON output.
        #[arg(long, default_value = "damper_fit.json")]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> legdrop_core::Result<()> {
    let resolved = resolve(&cli.common)?;
    match cli.command {
        Command::Simulate {
            out_dir,
            export_sensors,
        } => cmd_simulate(
            &resolved,
            &SimulateArgs {
                out_dir,
                export_sensors,
            },
        ),
        Command::Table2 {
            paper_coefficients,
            calibrate_coefficients: _,
            dh,
            sets,
            out,
            json,
        } => cmd_table2(
            &resolved,
            &Table2Args {
                paper_coefficients,
                delta_h: dh,
                sets,
                out,
                json,
            },
        ),
        Command::Calibrate {
            target_mj,
            mode,
            tol_mj,
            bracket,
            out,
        } => {
            let bracket = bracket.as_deref().map(parse_interval).transpose()?;
            cmd_calibrate(
                &resolved,
                &CalibrateArgs {
                    target_mj,
                    mode: mode.into(),
                    tol_mj,
                    bracket,
                    out,
                },
            )
        }
        Command::Sweep { dh_range, out } => {
            let range = parse_range(&dh_range)?;
            cmd_sweep(&resolved, &SweepArgs { range, out })
        }
        Command::Analyze {
            force,
            encoder,
            slow,
            impact_mj,
            threshold,
            force_span,
            encoder_span,
            out,
            workloop_csv,
        } => {
            let slow = match slow {
                None => None,
                Some(pair) if pair.len() == 2 => Some((pair[0].clone(), pair[1].clone())),
                Some(_) => {
                    return Err(legdrop_core::Error::Degenerate(
                        "--slow needs exactly two paths: force.csv,encoder.csv".into(),
                    ))
                }
            };
            cmd_analyze(
                &resolved,
                &AnalyzeArgs {
                    force,
                    encoder,
                    slow,
                    impact_mj,
                    threshold,
                    force_span,
                    encoder_span,
                    out,
                    workloop_csv,
                },
            )
        }
        Command::Characterize {
            force,
            velocity,
            window,
            force_span,
            out,
        } => {
            let window = parse_interval(&window)?;
            cmd_characterize(
                &resolved,
                &CharacterizeArgs {
                    force,
                    velocity,
                    window,
                    force_span,
                    out,
                },
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
