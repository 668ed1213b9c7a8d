//! Browser bindings: run the bundled scenarios with a chosen observation error
//! and evaluate the suboptimality bound.

use myopic::bounds::{suboptimality_bound, BoundInputs};
use myopic::harness::{apply_parameter, run, Mode, RunResult, Scenario};
use myopic::RegularityConstants;
use wasm_bindgen::prelude::*;

const EXAMPLE1: &str = include_str!("../../core/scenarios/example1.scn");
const OSIRIS: &str = include_str!("../../core/scenarios/osiris.scn");

/// Outcome and true path of one simulated run.
#[wasm_bindgen]
pub struct Simulation {
    outcome: String,
    error: f64,
    min_distance: f64,
    path: Vec<f64>,
    dim: usize,
}

#[wasm_bindgen]
impl Simulation {
    /// `landed`, `reached_target`, `collided` or `timed_out`.
    #[wasm_bindgen(getter)]
    pub fn outcome(&self) -> String {
        self.outcome.clone()
    }

    /// Landing or target error, `NaN` if neither was reached.
    #[wasm_bindgen(getter)]
    pub fn error(&self) -> f64 {
        self.error
    }

    #[wasm_bindgen(getter, js_name = minDistance)]
    pub fn min_distance(&self) -> f64 {
        self.min_distance
    }

    /// True positions, `dim` numbers per sample.
    #[wasm_bindgen(getter)]
    pub fn path(&self) -> Vec<f64> {
        self.path.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn dim(&self) -> usize {
        self.dim
    }
}

fn to_js(e: myopic::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn configure(text: &str, mode: &str, e: f64, ratio: f64) -> myopic::Result<Scenario> {
    let mut s = Scenario::parse(text)?;
    s.mode = mode.parse::<Mode>()?;
    if e != 0.0 {
        s = apply_parameter(&s, "e", &e.to_string())?;
        s = apply_parameter(&s, "delta_ratio", &ratio.to_string())?;
    }
    Ok(s)
}

fn summarize(r: &RunResult, dim: usize) -> Simulation {
    let path = r
        .true_trajectory
        .samples()
        .iter()
        .flat_map(|s| s.x.iter().take(dim).copied().collect::<Vec<_>>())
        .collect();
    Simulation {
        outcome: r.outcome.label().to_string(),
        error: r.landing_or_target_error().unwrap_or(f64::NAN),
        min_distance: r.min_distance_to_unsafe.unwrap_or(f64::NAN),
        path,
        dim,
    }
}

/// Planar obstacle example with a constant error `e` on the second position
/// coordinate; robust runs assume the bound `ratio * e`.
pub fn simulate_obstacle(mode: &str, e: f64, ratio: f64) -> myopic::Result<Simulation> {
    let s = configure(EXAMPLE1, mode, e, ratio)?;
    Ok(summarize(&run(&s)?, 2))
}

/// Asteroid landing with a constant error `e` on the altitude axis.
pub fn simulate_landing(mode: &str, e: f64, ratio: f64) -> myopic::Result<Simulation> {
    let s = configure(OSIRIS, mode, e, ratio)?;
    Ok(summarize(&run(&s)?, 3))
}

/// Worst-case suboptimality gap for the given constants.
pub fn bound_value(
    m: usize,
    epsilon: f64,
    delta_probe: f64,
    delta_obs: f64,
    lipschitz: f64,
    m0: f64,
    m1: f64,
) -> myopic::Result<f64> {
    let consts = RegularityConstants::new(m0, m1, lipschitz)?;
    if m == 0 || !(epsilon > 0.0) || !(delta_probe > 0.0) || !(delta_obs >= 0.0) {
        return Err(myopic::Error::InvalidArgument(
            "need m >= 1, epsilon > 0, delta > 0 and Delta >= 0".into(),
        ));
    }
    Ok(suboptimality_bound(&BoundInputs {
        consts,
        m,
        epsilon,
        delta_probe,
        delta_obs,
    }))
}

#[wasm_bindgen(js_name = runObstacle)]
pub fn run_obstacle(mode: &str, e: f64, ratio: f64) -> Result<Simulation, JsError> {
    simulate_obstacle(mode, e, ratio).map_err(to_js)
}

#[wasm_bindgen(js_name = runLanding)]
pub fn run_landing(mode: &str, e: f64, ratio: f64) -> Result<Simulation, JsError> {
    simulate_landing(mode, e, ratio).map_err(to_js)
}

#[wasm_bindgen(js_name = suboptimalityBound)]
pub fn suboptimality_bound_js(
    m: usize,
    epsilon: f64,
    delta_probe: f64,
    delta_obs: f64,
    lipschitz: f64,
    m0: f64,
    m1: f64,
) -> Result<f64, JsError> {
    bound_value(m, epsilon, delta_probe, delta_obs, lipschitz, m0, m1).map_err(to_js)
}
