//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use myopic::goodness::FnGoodness;
use myopic::learner::{make_schedule, LearnedDirection, ProbeRecord};
use myopic::{enumerate_grid, ControlAction, ControlGrid, GoodnessValue, LearnerConfig, State, Trajectory, Vector};
use rand::Rng;

/// Probe record of the scalar integrator `x' = u` started at 0, for which the
/// learned direction is exactly `v(u) = u`.
pub fn integrator_direction() -> LearnedDirection {
    let cfg = LearnerConfig::new(1, 0.5, 1.0).unwrap();
    let schedule = make_schedule(ControlAction::zeros(1), &cfg);
    let states = vec![
        State::new(0.0, Vector::from_vec(vec![0.0])).unwrap(),
        State::new(0.5, Vector::from_vec(vec![0.0])).unwrap(),
        State::new(1.0, Vector::from_vec(vec![0.5])).unwrap(),
    ];
    LearnedDirection::new(ProbeRecord::new(states, schedule, 0.0).unwrap())
}

/// Trajectory ending at the integrator record's last state.
pub fn integrator_phi() -> Trajectory {
    Trajectory::new(State::new(1.0, Vector::from_vec(vec![0.5])).unwrap())
}

/// Random `rows x cols` goodness table in which each entry is a constraint
/// violation with probability `p_violation`.
pub fn random_table<R: Rng>(rng: &mut R, rows: usize, cols: usize, p_violation: f64) -> Vec<Vec<GoodnessValue>> {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.gen_bool(p_violation) {
                        GoodnessValue::NegInfinity
                    } else {
                        // Coarse values so that ties occur.
                        GoodnessValue::Finite(rng.gen_range(-8..8) as f64)
                    }
                })
                .collect()
        })
        .collect()
}

/// Goodness reading `table[u][w]`, with the control `u` recovered from the
/// integrator velocity and the offset index `w` from the shifted state.
pub fn table_goodness(
    table: Vec<Vec<GoodnessValue>>,
) -> FnGoodness<impl Fn(&Trajectory, &Vector) -> GoodnessValue + Send + Sync> {
    FnGoodness(move |phi: &Trajectory, v: &Vector| {
        let w = (phi.last().x[0] - 0.5).round() as usize;
        let u = v[0].round() as usize;
        table[u][w]
    })
}

/// Brute-force max-min with first-index tie breaking: `(row, value)`.
pub fn brute_max_min(table: &[Vec<GoodnessValue>]) -> (usize, GoodnessValue) {
    let mut best: Option<(usize, GoodnessValue)> = None;
    for (i, row) in table.iter().enumerate() {
        let worst = row.iter().copied().min().unwrap();
        if best.is_none_or(|(_, b)| worst > b) {
            best = Some((i, worst));
        }
    }
    best.unwrap()
}

/// Integer controls `0, 1, .., rows - 1`.
pub fn row_grid(rows: usize) -> ControlGrid {
    if rows == 1 {
        ControlGrid::singleton(ControlAction::zeros(1))
    } else {
        enumerate_grid(&[0.0], &[(rows - 1) as f64], &[rows]).unwrap()
    }
}
