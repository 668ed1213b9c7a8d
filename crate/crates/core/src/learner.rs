//! Local dynamics identification from short probe maneuvers.
//!
//! During one learning cycle the controls `u* + du_0, ..., u* + du_m` are
//! held for `epsilon` seconds each and the state is observed at every
//! interval boundary. For a control-affine system the velocity under any
//! control `u` is then approximated by the affine combination
//! `sum_j lambda_j (x_{j+1} - x_j) / epsilon`, where `lambda` are the
//! barycentric coordinates of `u` with respect to the probe controls.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::types::{ControlAction, LearnerConfig, State, Vector};

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSchedule {
    base: ControlAction,
    deltas: Vec<Vector>,
    epsilon: f64,
    /// Inverse of the (m+1)x(m+1) barycentric system matrix.
    barycentric: DMatrix<f64>,
}

impl ProbeSchedule {
    /// Schedule with arbitrary probe offsets. `deltas[0]` must be zero and the
    /// probe controls must be affinely independent.
    pub fn from_deltas(base: ControlAction, deltas: Vec<Vector>, epsilon: f64) -> Result<Self> {
        let m = base.dim();
        if deltas.len() != m + 1 {
            return Err(Error::DimensionMismatch {
                expected: m + 1,
                found: deltas.len(),
            });
        }
        if let Some(d) = deltas.iter().find(|d| d.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: d.len(),
            });
        }
        if deltas[0].iter().any(|v| *v != 0.0) {
            return Err(Error::InvalidArgument("first probe offset must be zero".into()));
        }
        if !(epsilon > 0.0) {
            return Err(Error::InvalidArgument(format!("epsilon {epsilon} must be > 0")));
        }

        // Row 0 enforces sum(lambda) = 1, rows 1..=m reproduce u - base.
        // Working relative to the base keeps the inverse independent of |u*|.
        let mut system = DMatrix::zeros(m + 1, m + 1);
        for (j, d) in deltas.iter().enumerate() {
            system[(0, j)] = 1.0;
            for i in 0..m {
                system[(i + 1, j)] = d[i];
            }
        }
        let barycentric = system.try_inverse().ok_or(Error::SingularProbeSystem)?;
        if barycentric.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularProbeSystem);
        }
        Ok(Self {
            base,
            deltas,
            epsilon,
            barycentric,
        })
    }

    pub fn base(&self) -> &ControlAction {
        &self.base
    }

    pub fn deltas(&self) -> &[Vector] {
        &self.deltas
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn control_dim(&self) -> usize {
        self.base.dim()
    }

    /// The m+1 controls applied during the cycle, in order.
    pub fn controls(&self) -> impl Iterator<Item = ControlAction> + '_ {
        self.deltas.iter().map(|d| ControlAction(&self.base.0 + d))
    }

    pub fn solve_lambda(&self, u: &ControlAction) -> Result<Vector> {
        solve_lambda(self, u)
    }
}

/// Probe offsets `0, delta*e_1, ..., delta*e_m` around `base`.
pub fn make_schedule(base: ControlAction, cfg: &LearnerConfig) -> ProbeSchedule {
    let m = cfg.m;
    let mut deltas = vec![Vector::zeros(m)];
    for j in 0..m {
        let mut d = Vector::zeros(m);
        d[j] = cfg.delta_probe;
        deltas.push(d);
    }
    ProbeSchedule::from_deltas(base, deltas, cfg.epsilon).expect("scaled basis offsets are affinely independent")
}

/// Unique `lambda` with `sum lambda_j = 1` and `sum lambda_j (u* + du_j) = u`.
pub fn solve_lambda(schedule: &ProbeSchedule, u: &ControlAction) -> Result<Vector> {
    let m = schedule.control_dim();
    if u.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: u.dim(),
        });
    }
    let mut rhs = Vector::zeros(m + 1);
    rhs[0] = 1.0;
    rhs.rows_mut(1, m).copy_from(&(&u.0 - &schedule.base.0));
    Ok(&schedule.barycentric * rhs)
}

/// Observations gathered over one learning cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeRecord {
    states: Vec<State>,
    schedule: ProbeSchedule,
    t0: f64,
}

impl ProbeRecord {
    /// `states` are the m+2 observations at `t0 + j*epsilon`, `j = 0..=m+1`.
    pub fn new(states: Vec<State>, schedule: ProbeSchedule, t0: f64) -> Result<Self> {
        let m = schedule.control_dim();
        if states.len() != m + 2 {
            return Err(Error::DimensionMismatch {
                expected: m + 2,
                found: states.len(),
            });
        }
        let n = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.dim(),
            });
        }
        let eps = schedule.epsilon();
        for (j, s) in states.iter().enumerate() {
            let expected = t0 + j as f64 * eps;
            if (s.t - expected).abs() > 1e-9 * (1.0 + expected.abs()) {
                return Err(Error::InvalidArgument(format!(
                    "probe observation {j} at t = {} but expected {expected}",
                    s.t
                )));
            }
        }
        Ok(Self { states, schedule, t0 })
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn schedule(&self) -> &ProbeSchedule {
        &self.schedule
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn shifted(&self, offset: &Vector) -> Self {
        Self {
            states: self.states.iter().map(|s| s.shifted(offset)).collect(),
            schedule: self.schedule.clone(),
            t0: self.t0,
        }
    }
}

/// The learned map `u -> v(u, x)`; attached to the last observed state of the
/// cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct LearnedDirection {
    record: ProbeRecord,
    // column j holds (x_{j+1} - x_j) / epsilon
    differences: DMatrix<f64>,
}

impl LearnedDirection {
    pub fn new(record: ProbeRecord) -> Self {
        let states = record.states();
        let n = states[0].dim();
        let cols = states.len() - 1;
        let eps = record.schedule().epsilon();
        let mut differences = DMatrix::zeros(n, cols);
        for j in 0..cols {
            let d = (&states[j + 1].x - &states[j].x) / eps;
            differences.set_column(j, &d);
        }
        Self { record, differences }
    }

    pub fn record(&self) -> &ProbeRecord {
        &self.record
    }

    pub fn state(&self) -> &State {
        self.record.states().last().expect("record holds m+2 states")
    }

    /// Direction re-learned from probe states moved by `offset`.
    pub fn shifted(&self, offset: &Vector) -> Self {
        Self::new(self.record.shifted(offset))
    }

    pub fn estimate(&self, u: &ControlAction) -> Result<Vector> {
        estimate_direction(self, u)
    }
}

/// `sum_j lambda_j (x_{j+1} - x_j) / epsilon` for the control `u`.
pub fn estimate_direction(ld: &LearnedDirection, u: &ControlAction) -> Result<Vector> {
    let lambda = solve_lambda(ld.record.schedule(), u)?;
    Ok(&ld.differences * lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg(m: usize, delta: f64) -> LearnerConfig {
        LearnerConfig::new(m, 0.1, delta).unwrap()
    }

    #[test]
    fn schedule_examples() {
        let s = make_schedule(ControlAction::zeros(2), &cfg(2, 0.1));
        let d: Vec<Vec<f64>> = s.deltas().iter().map(|d| d.iter().copied().collect()).collect();
        assert_eq!(d, vec![vec![0.0, 0.0], vec![0.1, 0.0], vec![0.0, 0.1]]);

        let s = make_schedule(ControlAction::zeros(1), &cfg(1, 1.0));
        assert_eq!(s.deltas()[1][0], 1.0);

        let s = make_schedule(ControlAction::zeros(3), &cfg(3, 0.5));
        assert_eq!(s.deltas().len(), 4);
        for d in &s.deltas()[1..] {
            assert_abs_diff_eq!(d.norm(), 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn lambda_examples() {
        let base = ControlAction::from_slice(&[0.3, -0.7]);
        let s = make_schedule(base.clone(), &cfg(2, 0.2));
        let l = solve_lambda(&s, &base).unwrap();
        assert_abs_diff_eq!(l, Vector::from_vec(vec![1.0, 0.0, 0.0]), epsilon = 1e-12);

        let s = make_schedule(ControlAction::zeros(2), &cfg(2, 1.0));
        let l = solve_lambda(&s, &ControlAction::from_slice(&[1.0, 0.0])).unwrap();
        assert_abs_diff_eq!(l, Vector::from_vec(vec![0.0, 1.0, 0.0]), epsilon = 1e-12);

        // By hand: l1 = 0.5, l2 = 0.5, l0 = 1 - l1 - l2 = 0.
        let l = solve_lambda(&s, &ControlAction::from_slice(&[0.5, 0.5])).unwrap();
        assert_abs_diff_eq!(l, Vector::from_vec(vec![0.0, 0.5, 0.5]), epsilon = 1e-12);
    }

    #[test]
    fn lambda_residual_is_small() {
        let base = ControlAction::from_slice(&[3.0, -2.0, 0.5]);
        let s = make_schedule(base, &cfg(3, 0.01));
        let u = ControlAction::from_slice(&[-4.0, 7.0, 1.25]);
        let l = solve_lambda(&s, &u).unwrap();
        let tol = 1e-10 * (1.0 + u.0.norm());
        assert!((l.sum() - 1.0).abs() <= tol);
        let recon = s
            .controls()
            .zip(l.iter())
            .fold(Vector::zeros(3), |acc, (c, w)| acc + c.0 * *w);
        assert!((recon - &u.0).norm() <= tol * 100.0);
    }

    #[test]
    fn singular_schedule_is_rejected() {
        let deltas = vec![
            Vector::zeros(2),
            Vector::from_vec(vec![1.0, 1.0]),
            Vector::from_vec(vec![2.0, 2.0]),
        ];
        let err = ProbeSchedule::from_deltas(ControlAction::zeros(2), deltas, 0.1).unwrap_err();
        assert!(matches!(err, Error::SingularProbeSystem));
    }

    #[test]
    fn static_system_gives_zero_direction() {
        let s = make_schedule(ControlAction::zeros(2), &cfg(2, 0.5));
        let x = Vector::from_vec(vec![1.0, 2.0, 3.0]);
        let states = (0..4).map(|j| State::new(j as f64 * 0.1, x.clone()).unwrap()).collect();
        let ld = LearnedDirection::new(ProbeRecord::new(states, s, 0.0).unwrap());
        let v = ld.estimate(&ControlAction::from_slice(&[5.0, -3.0])).unwrap();
        assert_eq!(v, Vector::zeros(3));
    }

    #[test]
    fn record_checks_timestamps() {
        let s = make_schedule(ControlAction::zeros(1), &cfg(1, 0.5));
        let states = vec![
            State::new(0.0, Vector::zeros(1)).unwrap(),
            State::new(0.1, Vector::zeros(1)).unwrap(),
            State::new(0.25, Vector::zeros(1)).unwrap(),
        ];
        assert!(ProbeRecord::new(states, s, 0.0).is_err());
    }
}
