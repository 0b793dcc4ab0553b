//! Sweep ground-height perturbations for a matched viscous/Coulomb pair
//! and print how much of each perturbation the damper rejects.
//!
//! Run with: cargo run --example perturbation_sweep

use legdrop_core::calibrate::{
    calibrate, even_grid, sweep_delta_h, DampingMode, DampingTarget,
};
use legdrop_core::fit::fit_line;
use legdrop_core::params::LegParams;
use legdrop_core::sim::DropConfig;

fn main() {
    let params = LegParams::default();
    let cfg = DropConfig::default();

    // Calibrate both laws to the same reference dissipation level.
    let level = params.mass * params.gravity * 0.3 * params.resting_length();
    println!("target level: {:.1} mJ at h0 = {} m\n", level * 1e3, cfg.reference_height);

    let grid = even_grid(-0.025, 0.025, 11);
    for mode in [DampingMode::Viscous, DampingMode::Coulomb] {
        let coefficient =
            calibrate(&params, &DampingTarget::new(level, mode), &cfg).expect("calibrates");
        let curve = sweep_delta_h(&params, &mode.damper(coefficient), &cfg, &grid).unwrap();

        let xs: Vec<f64> = curve.points.iter().map(|p| p.delta_h).collect();
        let ys: Vec<f64> = curve.points.iter().map(|p| p.delta_ed).collect();
        let fit = fit_line(&xs, &ys).unwrap();

        println!(
            "{} (coefficient {:.1}): slope {:.2} J/m of the {:.2} J/m full-rejection line, R^2 = {:.4}",
            mode.as_str(),
            coefficient,
            fit.slope,
            params.mass * params.gravity,
            fit.r_squared
        );
        for p in &curve.points {
            let rejected = if p.delta_h == 0.0 {
                0.0
            } else {
                p.delta_ed / p.full_rejection * 100.0
            };
            println!(
                "  dh = {:+.3} m: dE_D = {:+6.1} mJ ({rejected:.0}% rejected)",
                p.delta_h,
                p.delta_ed * 1e3
            );
        }
        println!();
    }
}
