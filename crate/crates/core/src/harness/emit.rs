use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::types::Trajectory;

use super::run::{Outcome, RunResult};

pub const TRUE_CSV: &str = "trajectory_true.csv";
pub const OBS_CSV: &str = "trajectory_obs.csv";
pub const DECISIONS_CSV: &str = "decisions.csv";
pub const SUMMARY: &str = "summary.txt";

fn num(v: f64) -> String {
    format!("{v:.11e}")
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t");
    for i in 1..=traj.dim() {
        let _ = write!(out, ",x{i}");
    }
    out.push('\n');
    for s in traj.samples() {
        out.push_str(&num(s.t));
        for v in s.x.iter() {
            out.push(',');
            out.push_str(&num(*v));
        }
        out.push('\n');
    }
    out
}

pub fn decisions_csv(result: &RunResult) -> String {
    let mut out = String::from("t");
    for i in 1..=result.control_dim {
        let _ = write!(out, ",u{i}");
    }
    out.push_str(",value,worst_offset_index\n");
    for c in &result.cycles {
        out.push_str(&num(c.t));
        for v in c.decision.control.0.iter() {
            out.push(',');
            out.push_str(&num(*v));
        }
        let _ = writeln!(out, ",{},{}", c.decision.value, c.decision.worst_offset);
    }
    out
}

/// Flat `key=value` summary. Everything except `wall_time_s` is a pure
/// function of scenario and seed.
pub fn summary(result: &RunResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario={}", result.scenario);
    let _ = writeln!(out, "mode={}", result.mode);
    let _ = writeln!(out, "outcome={}", result.outcome.label());
    let _ = writeln!(out, "outcome_time={}", num(result.outcome.time()));
    match &result.outcome {
        Outcome::Landed { error, .. } => {
            let _ = writeln!(out, "landing_error={}", num(*error));
        }
        Outcome::ReachedTarget { error, .. } => {
            let _ = writeln!(out, "target_error={}", num(*error));
        }
        Outcome::Collided { t, location } => {
            let _ = writeln!(out, "first_violation_time={}", num(*t));
            let loc: Vec<String> = location.iter().map(|v| num(*v)).collect();
            let _ = writeln!(out, "violation_location={}", loc.join(","));
        }
        Outcome::TimedOut { .. } => {}
    }
    let _ = writeln!(out, "final_error={}", num(result.final_error()));
    if let Some(d) = result.min_distance_to_unsafe {
        let _ = writeln!(out, "min_distance_to_unsafe={}", num(d));
    }
    let _ = writeln!(out, "cycles={}", result.completed_cycles);
    let _ = writeln!(out, "decisions={}", result.cycles.len());
    let _ = writeln!(out, "wall_time_s={:.6}", result.wall_time.as_secs_f64());
    out
}

pub fn emit(result: &RunResult, out_dir: &Path) -> Result<()> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    fs::create_dir_all(out_dir).map_err(io(out_dir))?;
    let files = [
        (TRUE_CSV, trajectory_csv(&result.true_trajectory)),
        (OBS_CSV, trajectory_csv(&result.observed_trajectory)),
        (DECISIONS_CSV, decisions_csv(result)),
        (SUMMARY, summary(result)),
    ];
    for (name, body) in files {
        let path = out_dir.join(name);
        fs::write(&path, body).map_err(io(&path))?;
    }
    Ok(())
}
