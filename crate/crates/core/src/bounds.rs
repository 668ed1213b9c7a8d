//! Suboptimality guarantee for the robust myopic law and its empirical
//! counterpart measured against the true plant.

use crate::error::{Error, Result};
use crate::harness::{run, RunResult, Scenario};
use crate::plants::Dynamics;
use crate::types::{GoodnessValue, RegularityConstants};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundInputs {
    pub consts: RegularityConstants,
    /// Control dimension.
    pub m: usize,
    pub epsilon: f64,
    /// Probe magnitude.
    pub delta_probe: f64,
    /// Observation error bound.
    pub delta_obs: f64,
}

/// Worst-case gap between the goodness of the robust myopic control and the
/// best control under the true dynamics, at the end of each learning cycle:
///
/// `8 L M0 M1 (m+1)^3 (4 m^1.5 + d) eps / d
///   + 2 L (3 D + (4 D / eps) (1 + 4 m sqrt(m) / d))`
///
/// with probe magnitude `d` and observation error bound `D`.
pub fn suboptimality_bound(b: &BoundInputs) -> f64 {
    let l = b.consts.lipschitz;
    let m = b.m as f64;
    let (eps, d, obs) = (b.epsilon, b.delta_probe, b.delta_obs);
    let learning = 8.0 * l * b.consts.m0 * b.consts.m1 * (m + 1.0).powi(3) * (4.0 * m.powf(1.5) + d) * eps / d;
    let observation = 2.0 * l * (3.0 * obs + (4.0 * obs / eps) * (1.0 + 4.0 * m * m.sqrt() / d));
    learning + observation
}

/// Realized gap `|G(u+) - max_u G(u)|` after every decision of `result`,
/// evaluating the goodness on the true trajectory with the true derivative.
/// An infinite gap means the chosen control was scored `NegInfinity` while a
/// finite alternative existed.
pub fn empirical_gaps(scenario: &Scenario, result: &RunResult) -> Result<Vec<f64>> {
    let built = scenario.build()?;
    result
        .cycles
        .iter()
        .map(|cycle| {
            let phi = result.true_trajectory.truncated(cycle.t + 1e-9);
            let x = &phi.last().x;
            let g = |u: &crate::types::ControlAction| -> Result<GoodnessValue> {
                let v = built.plant.deriv(x, &u.0)?;
                Ok(built.goodness.evaluate(&phi, &v))
            };
            let chosen = g(&cycle.decision.control)?;
            let mut best = GoodnessValue::NegInfinity;
            for u in built.grid.points() {
                best = best.max(g(u)?);
            }
            Ok(match (chosen, best) {
                (GoodnessValue::Finite(a), GoodnessValue::Finite(b)) => (b - a).abs(),
                (GoodnessValue::NegInfinity, GoodnessValue::Finite(_)) => f64::INFINITY,
                _ => 0.0,
            })
        })
        .collect()
}

/// Gap after the `cycle_index`-th decision of a fresh run of `scenario`.
pub fn empirical_gap(scenario: &Scenario, cycle_index: usize) -> Result<f64> {
    let result = run(scenario)?;
    let gaps = empirical_gaps(scenario, &result)?;
    gaps.get(cycle_index).copied().ok_or_else(|| {
        Error::InvalidArgument(format!(
            "run made {} decisions, cycle {cycle_index} requested",
            gaps.len()
        ))
    })
}
