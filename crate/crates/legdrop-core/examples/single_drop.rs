//! Drop the leg once with each damping law and compare what the two
//! dampers absorb, plus where the drop energy went.
//!
//! Run with: cargo run --example single_drop

use legdrop_core::dynamics::mechanical_energy;
use legdrop_core::energy::{loop_area, workloop_from_trajectory};
use legdrop_core::params::{DamperSpec, LegParams};
use legdrop_core::sim::{simulate_drop, DropConfig, EventKind};

fn main() {
    let params = LegParams::default();
    let cfg = DropConfig::with_height(0.14);

    // Matched pair: both dampers dissipate ~156 mJ at the reference
    // height, yet respond differently to perturbations.
    let dampers = [
        ("viscous d_v = 51 N s/m", DamperSpec::pure_viscous(51.0)),
        ("coulomb d_c = 13.2 N", DamperSpec::pure_coulomb(13.2)),
    ];

    for (label, spec) in dampers {
        let (traj, summary) = simulate_drop(&params, &spec, &cfg).expect("drop integrates");
        let lp = workloop_from_trajectory(&traj, &params).unwrap();
        let area = loop_area(&lp).unwrap().abs();
        let t_mc = traj.event_time(EventKind::MaxCompression).unwrap();
        let t_td = traj.event_time(EventKind::TouchDown).unwrap();

        println!("{label}");
        println!(
            "  touch-down at {:.1} ms with {:.2} m/s, max compression {:.1} ms later",
            t_td * 1e3,
            summary.v_touchdown,
            (t_mc - t_td) * 1e3
        );
        println!(
            "  E_T = {:.1} mJ, E_D = {:.1} mJ ({:.0}% of the drop energy)",
            summary.e_total * 1e3,
            summary.e_dissipated * 1e3,
            summary.e_dissipated / summary.e_total * 100.0
        );
        println!(
            "  work-loop area {:.1} mJ over {} stance samples, rebound at {:.2} m/s",
            area * 1e3,
            lp.len(),
            summary.v_liftoff.unwrap_or(0.0)
        );

        // The stance is energy-consistent: mechanical energy at lift-off
        // equals the touch-down value minus the damper losses.
        let stance: Vec<_> = traj.stance().collect();
        let e0 = mechanical_energy(&stance.first().unwrap().state(), &params);
        let e1 = mechanical_energy(&stance.last().unwrap().state(), &params);
        println!(
            "  energy audit: {:.1} mJ in, {:.1} mJ out, {:.1} mJ dissipated\n",
            e0 * 1e3,
            e1 * 1e3,
            (e0 - e1) * 1e3
        );
    }
}
