//! Experiment harness: scenario configuration, deterministic runs, metrics,
//! and CSV emission for the SE(3) disturbance-rejection simulations.

pub mod csv;
pub mod metrics;
pub mod runner;
pub mod scenario;

use adrc_core::sim::TrajectoryRef;
use scenario::Scenario;

/// The observer benchmark: four reference trajectories, each run with clean
/// and with noisy measurements.
pub fn observer_suite_scenarios() -> Vec<Scenario> {
    let mut out = Vec::new();
    for trajectory in [
        TrajectoryRef::Hover,
        TrajectoryRef::SlowSwing,
        TrajectoryRef::FastSwing,
        TrajectoryRef::HighPitch,
    ] {
        for noisy in [false, true] {
            out.push(Scenario::observer_benchmark(trajectory, noisy));
        }
    }
    out
}

/// The closed-loop tracking benchmark under its four rejection
/// configurations.
pub fn adrc_suite_scenarios() -> Vec<Scenario> {
    let mut out = Vec::new();
    for (name, force, torque) in [
        ("adrc_none", false, false),
        ("adrc_force", true, false),
        ("adrc_torque", false, true),
        ("adrc_both", true, true),
    ] {
        let mut sc = Scenario::closed_loop_benchmark();
        sc.name = name.to_string();
        sc.reject_force = force;
        sc.reject_torque = torque;
        out.push(sc);
    }
    out
}
