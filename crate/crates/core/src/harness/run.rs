//! The learn / select / apply loop.
//!
//! Each cycle applies the probe controls around the current base control,
//! observing the plant at every interval boundary, learns the local direction
//! from those observations and selects the next base control. The controller
//! only ever sees observations; true states feed the plant, the event checks
//! and the metrics.

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::learner::{make_schedule, LearnedDirection, ProbeRecord};
use crate::optimizer::{nominal_select, robust_select, Decision};
use crate::plants::{integrate, observe, Dynamics};
use crate::types::{ControlAction, NoiseModel, State, Trajectory, Vector};

use super::scenario::{Built, Mode, Scenario};

/// Source of observations for the controller.
pub trait Observer {
    fn observe(&mut self, x_true: &State) -> State;
}

/// Sensor applying a [`NoiseModel`] with a seeded generator.
pub struct NoisySensor {
    noise: NoiseModel,
    rng: ChaCha8Rng,
}

impl NoisySensor {
    pub fn new(noise: NoiseModel, seed: u64) -> Self {
        Self {
            noise,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Observer for NoisySensor {
    fn observe(&mut self, x_true: &State) -> State {
        observe(x_true, &self.noise, &mut self.rng)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Landed { t: f64, error: f64 },
    ReachedTarget { t: f64, error: f64 },
    Collided { t: f64, location: Vec<f64> },
    TimedOut { t: f64 },
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Landed { .. } => "landed",
            Outcome::ReachedTarget { .. } => "reached_target",
            Outcome::Collided { .. } => "collided",
            Outcome::TimedOut { .. } => "timed_out",
        }
    }

    pub fn is_collision(&self) -> bool {
        matches!(self, Outcome::Collided { .. })
    }

    pub fn time(&self) -> f64 {
        match *self {
            Outcome::Landed { t, .. }
            | Outcome::ReachedTarget { t, .. }
            | Outcome::Collided { t, .. }
            | Outcome::TimedOut { t } => t,
        }
    }
}

/// Controls applied during one cycle and the decision taken at its end.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleLog {
    /// Decision time, the end of the cycle.
    pub t: f64,
    pub base: ControlAction,
    pub probes: Vec<ControlAction>,
    pub decision: Decision,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub scenario: String,
    pub mode: Mode,
    pub control_dim: usize,
    /// True states at every observation instant, plus the terminal state when
    /// the run ends between instants.
    pub true_trajectory: Trajectory,
    pub observed_trajectory: Trajectory,
    pub cycles: Vec<CycleLog>,
    /// Number of fully completed learning cycles.
    pub completed_cycles: usize,
    pub outcome: Outcome,
    pub target: Vec<f64>,
    pub min_distance_to_unsafe: Option<f64>,
    pub wall_time: Duration,
}

impl RunResult {
    /// Distance of the last true position to the target.
    pub fn final_error(&self) -> f64 {
        position_error(&self.true_trajectory.last().x, &self.target)
    }

    pub fn landing_or_target_error(&self) -> Option<f64> {
        match self.outcome {
            Outcome::Landed { error, .. } | Outcome::ReachedTarget { error, .. } => Some(error),
            _ => None,
        }
    }
}

fn position_error(x: &Vector, target: &[f64]) -> f64 {
    target.iter().enumerate().map(|(i, t)| (x[i] - t).powi(2)).sum::<f64>().sqrt()
}

pub fn run(scenario: &Scenario) -> Result<RunResult> {
    let built = scenario.build()?;
    let mut sensor = NoisySensor::new(built.noise.clone(), scenario.seed);
    run_built(scenario, &built, &built.plant, &mut sensor)
}

/// Runs with a caller-supplied ground-truth plant and sensor.
pub fn run_with(scenario: &Scenario, plant: &dyn Dynamics, observer: &mut dyn Observer) -> Result<RunResult> {
    let built = scenario.build()?;
    if plant.state_dim() != scenario.state_dim() || plant.control_dim() != scenario.control_dim() {
        return Err(Error::DimensionMismatch {
            expected: scenario.state_dim(),
            found: plant.state_dim(),
        });
    }
    run_built(scenario, &built, plant, observer)
}

enum Event {
    Collided { t: f64, location: Vec<f64> },
    Landed { t: f64, error: f64 },
}

fn run_built(scenario: &Scenario, built: &Built, plant: &dyn Dynamics, observer: &mut dyn Observer) -> Result<RunResult> {
    let started = Instant::now();
    let m = built.learner.m;
    let eps = built.learner.epsilon;

    let x0 = State::new(0.0, Vector::from_column_slice(&scenario.x0))?;
    let mut obs = observer.observe(&x0);
    let mut true_traj = Trajectory::new(x0.clone());
    let mut obs_traj = Trajectory::new(obs.clone());
    let mut x_true = x0;
    let mut instants = 0usize;
    let mut base = ControlAction::zeros(m);
    let mut cycles = Vec::new();
    let mut completed = 0usize;

    let finish = |true_traj: Trajectory, obs_traj: Trajectory, cycles, completed, outcome| {
        let min_distance = built.unsafe_set.as_ref().map(|set| {
            let d = set.position_dim();
            true_traj
                .samples()
                .iter()
                .map(|s| set.distance(&s.x.as_slice()[..d]))
                .fold(f64::INFINITY, f64::min)
        });
        RunResult {
            scenario: scenario.name.clone(),
            mode: scenario.mode,
            control_dim: m,
            true_trajectory: true_traj,
            observed_trajectory: obs_traj,
            cycles,
            completed_cycles: completed,
            outcome,
            target: built.target.clone(),
            min_distance_to_unsafe: min_distance,
            wall_time: started.elapsed(),
        }
    };

    if let Some(set) = &built.unsafe_set {
        if set.contains_position(&x_true.x.as_slice()[..set.position_dim()]) {
            let location = x_true.x.as_slice()[..set.position_dim()].to_vec();
            return Ok(finish(true_traj, obs_traj, cycles, completed, Outcome::Collided { t: 0.0, location }));
        }
    }

    loop {
        let t0 = instants as f64 * eps;
        let schedule = make_schedule(base.clone(), &built.learner);
        let probes: Vec<ControlAction> = schedule.controls().collect();
        let mut probe_states = vec![obs.clone()];

        for u in &probes {
            let mut event = None;
            let flow = integrate(plant, &x_true, u, &built.integrator, eps, |prev, next| {
                match detect_event(built, prev, next) {
                    Some(e) => {
                        event = Some(e);
                        ControlFlow::Break(())
                    }
                    None => ControlFlow::Continue(()),
                }
            })?;
            match flow {
                ControlFlow::Break(terminal) => {
                    let terminal_obs = observer.observe(&terminal);
                    true_traj.push(terminal)?;
                    obs_traj.push(terminal_obs)?;
                    let outcome = match event.expect("break carries an event") {
                        Event::Collided { t, location } => Outcome::Collided { t, location },
                        Event::Landed { t, error } => Outcome::Landed { t, error },
                    };
                    return Ok(finish(true_traj, obs_traj, cycles, completed, outcome));
                }
                ControlFlow::Continue(mut s) => {
                    instants += 1;
                    s.t = instants as f64 * eps;
                    x_true = s;
                }
            }
            obs = observer.observe(&x_true);
            true_traj.push(x_true.clone())?;
            obs_traj.push(obs.clone())?;
            probe_states.push(obs.clone());
        }
        completed += 1;

        if let Some(radius) = scenario.target_radius {
            let error = position_error(&x_true.x, &built.target);
            if error <= radius {
                let outcome = Outcome::ReachedTarget { t: x_true.t, error };
                return Ok(finish(true_traj, obs_traj, cycles, completed, outcome));
            }
        }
        if x_true.t >= scenario.t_final - 1e-9 {
            let outcome = Outcome::TimedOut { t: x_true.t };
            return Ok(finish(true_traj, obs_traj, cycles, completed, outcome));
        }

        let ld = LearnedDirection::new(ProbeRecord::new(probe_states, schedule, t0)?);
        let decision = match scenario.mode {
            Mode::Nominal => nominal_select(&built.grid, built.goodness.as_ref(), &obs_traj, &ld)?,
            Mode::Robust => robust_select(&built.grid, built.goodness.as_ref(), &obs_traj, &ld, &built.perturbations)?,
        };
        let next_base = decision.control.clone();
        cycles.push(CycleLog {
            t: x_true.t,
            base,
            probes,
            decision,
        });
        base = next_base;
    }
}

fn detect_event(built: &Built, prev: &State, next: &State) -> Option<Event> {
    if let Some(set) = &built.unsafe_set {
        let d = set.position_dim();
        let p = &next.x.as_slice()[..d];
        if set.contains_position(p) {
            return Some(Event::Collided {
                t: next.t,
                location: p.to_vec(),
            });
        }
    }
    if let Some(surface) = &built.surface {
        let sd_next = surface.signed_distance(&next.x.as_slice()[..3]);
        if sd_next <= 0.0 {
            let sd_prev = surface.signed_distance(&prev.x.as_slice()[..3]);
            // Linear interpolation of the crossing within the step.
            let frac = if sd_prev > 0.0 { sd_prev / (sd_prev - sd_next) } else { 0.0 };
            let touchdown: Vec<f64> = (0..3).map(|i| prev.x[i] + frac * (next.x[i] - prev.x[i])).collect();
            let error = position_error(&Vector::from_vec(touchdown), &built.target);
            return Some(Event::Landed {
                t: prev.t + frac * (next.t - prev.t),
                error,
            });
        }
    }
    None
}
