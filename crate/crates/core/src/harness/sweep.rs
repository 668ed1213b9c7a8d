use crate::error::{Error, Result};

use super::run::{run, RunResult};
use super::scenario::{GoodnessSpec, NoiseSpec, Scenario};

pub const SWEEP_PARAMETERS: &[&str] = &["e", "delta_ratio", "mode", "tau", "epsilon"];

/// Seed for the `index`-th run of a sweep (SplitMix64 of base and index).
pub fn derived_seed(base: u64, index: usize) -> u64 {
    let mut z = base.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Copy of `scenario` with one parameter replaced.
///
/// * `e`: constant observation error on the scenario's noise axis.
/// * `delta_ratio`: declared bound as a multiple of the error size.
/// * `mode`: `nominal` or `robust`.
/// * `tau`: obstacle repulsion weight.
/// * `epsilon`: probe interval length.
pub fn apply_parameter(scenario: &Scenario, param: &str, value: &str) -> Result<Scenario> {
    let mut s = scenario.clone();
    let number = || -> Result<f64> {
        value
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::InvalidArgument(format!("`{value}` is not a number for `{param}`")))
    };
    match param {
        "e" => {
            let axis = s
                .noise
                .axis
                .ok_or_else(|| Error::validation("noise.axis", "sweeping `e` needs a noise axis"))?;
            let mut offset = vec![0.0; s.state_dim()];
            offset[axis] = number()?;
            s.noise.spec = NoiseSpec::Constant { offset };
            if s.noise.bound_ratio.is_none() {
                s.noise.bound = None;
            }
        }
        "delta_ratio" => s.noise.bound_ratio = Some(number()?),
        "mode" => s.mode = value.trim().parse()?,
        "tau" => match &mut s.goodness {
            GoodnessSpec::Obstacle { tau, .. } | GoodnessSpec::Landing { tau, .. } => *tau = number()?,
            GoodnessSpec::Tracking { .. } => {
                return Err(Error::InvalidArgument("tracking goodness has no `tau`".into()));
            }
        },
        "epsilon" => s.epsilon = number()?,
        other => return Err(Error::UnknownParameter(other.to_string())),
    }
    s.validate()?;
    Ok(s)
}

/// One independent run per value; run `i` uses `derived_seed(seed, i)`.
pub fn sweep(scenario: &Scenario, param: &str, values: &[String]) -> Result<Vec<RunResult>> {
    if !SWEEP_PARAMETERS.contains(&param) {
        return Err(Error::UnknownParameter(param.to_string()));
    }
    let scenarios = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut s = apply_parameter(scenario, param, v)?;
            s.seed = derived_seed(scenario.seed, i);
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    run_all(&scenarios)
}

#[cfg(feature = "parallel")]
fn run_all(scenarios: &[Scenario]) -> Result<Vec<RunResult>> {
    use rayon::prelude::*;
    scenarios.par_iter().map(run).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_all(scenarios: &[Scenario]) -> Result<Vec<RunResult>> {
    scenarios.iter().map(run).collect()
}
