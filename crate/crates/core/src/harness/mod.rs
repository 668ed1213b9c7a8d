//! Scenario-driven simulation: loading scenario files, running the control
//! loop against a ground-truth plant, sweeping parameters and writing results.

mod emit;
mod run;
mod scenario;
mod sweep;

pub use emit::{decisions_csv, emit, summary, trajectory_csv, DECISIONS_CSV, OBS_CSV, SUMMARY, TRUE_CSV};
pub use run::{run, run_with, CycleLog, NoisySensor, Observer, Outcome, RunResult};
pub use scenario::{
    load_scenario, Built, GoodnessSpec, Mode, NoiseConfig, NoiseSpec, SafetySpec, Scenario,
};
pub use sweep::{apply_parameter, derived_seed, sweep, SWEEP_PARAMETERS};
