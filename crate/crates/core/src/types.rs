//! Shared domain types: states, trajectories, controls, the control grid,
//! extended-real goodness values and the configuration records used by the
//! learner, the bounds and the sensor model.

use std::cmp::Ordering;

use nalgebra::DVector;

use crate::error::{Error, Result};

pub type Vector = DVector<f64>;

/// A timestamped point of the state space.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub t: f64,
    pub x: Vector,
}

impl State {
    pub fn new(t: f64, x: Vector) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidArgument("state must have at least one component".into()));
        }
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidArgument(format!("state time {t} must be finite and >= 0")));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite state at t = {t}")));
        }
        Ok(Self { t, x })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// The same instant with every component moved by `offset`.
    pub fn shifted(&self, offset: &Vector) -> Self {
        Self {
            t: self.t,
            x: &self.x + offset,
        }
    }
}

/// Samples of a trajectory on `[0, T]`, strictly increasing in time.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    samples: Vec<State>,
}

impl Trajectory {
    pub fn new(first: State) -> Self {
        Self { samples: vec![first] }
    }

    pub fn from_samples(samples: Vec<State>) -> Result<Self> {
        let mut iter = samples.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::InvalidArgument("trajectory must be nonempty".into()))?;
        let mut traj = Self::new(first);
        for s in iter {
            traj.push(s)?;
        }
        Ok(traj)
    }

    pub fn push(&mut self, state: State) -> Result<()> {
        let last = self.last();
        if state.dim() != last.dim() {
            return Err(Error::DimensionMismatch {
                expected: last.dim(),
                found: state.dim(),
            });
        }
        if state.t <= last.t {
            return Err(Error::InvalidArgument(format!(
                "timestamps must increase: {} after {}",
                state.t, last.t
            )));
        }
        self.samples.push(state);
        Ok(())
    }

    pub fn samples(&self) -> &[State] {
        &self.samples
    }

    pub fn last(&self) -> &State {
        self.samples.last().expect("trajectory is never empty")
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.samples[0].dim()
    }

    /// End of the time domain.
    pub fn horizon(&self) -> f64 {
        self.last().t
    }

    pub fn shifted(&self, offset: &Vector) -> Self {
        Self {
            samples: self.samples.iter().map(|s| s.shifted(offset)).collect(),
        }
    }

    /// Prefix of samples with `t <= until`.
    pub fn truncated(&self, until: f64) -> Self {
        let n = self.samples.iter().take_while(|s| s.t <= until).count().max(1);
        Self {
            samples: self.samples[..n].to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ControlAction(pub Vector);

impl ControlAction {
    pub fn new(u: Vector) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::InvalidArgument("control must have at least one component".into()));
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite control".into()));
        }
        Ok(Self(u))
    }

    pub fn zeros(m: usize) -> Self {
        Self(Vector::zeros(m))
    }

    pub fn from_slice(u: &[f64]) -> Self {
        Self(Vector::from_column_slice(u))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_vector(&self) -> &Vector {
        &self.0
    }
}

/// Finite discretization of the admissible control set, a box in R^m.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlGrid {
    lower: Vec<f64>,
    upper: Vec<f64>,
    counts: Vec<usize>,
    points: Vec<ControlAction>,
}

impl ControlGrid {
    pub fn points(&self) -> &[ControlAction] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Largest absolute control component on the grid.
    pub fn max_abs(&self) -> f64 {
        self.lower
            .iter()
            .chain(&self.upper)
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// Grid containing a single control.
    pub fn singleton(u: ControlAction) -> Self {
        let v: Vec<f64> = u.0.iter().copied().collect();
        Self {
            lower: v.clone(),
            upper: v,
            counts: vec![1; u.dim()],
            points: vec![u],
        }
    }
}

/// Cartesian product of evenly spaced per-axis points, enumerated with the
/// last axis varying fastest. That order fixes tie-breaking downstream.
pub fn enumerate_grid(lower: &[f64], upper: &[f64], counts: &[usize]) -> Result<ControlGrid> {
    if lower.is_empty() || lower.len() != upper.len() || lower.len() != counts.len() {
        return Err(Error::InvalidArgument(
            "grid bounds and counts must be nonempty and of equal length".into(),
        ));
    }
    let mut axes = Vec::with_capacity(lower.len());
    for ((&lo, &hi), &k) in lower.iter().zip(upper).zip(counts) {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument("grid bounds must be finite".into()));
        }
        if lo > hi {
            return Err(Error::InvalidArgument(format!("grid bound {lo} > {hi}")));
        }
        if k < 2 {
            return Err(Error::InvalidArgument(format!("grid count {k} < 2")));
        }
        let step = (hi - lo) / (k - 1) as f64;
        let values: Vec<f64> = (0..k)
            .map(|i| if i == k - 1 { hi } else { lo + step * i as f64 })
            .collect();
        axes.push(values);
    }

    let total: usize = counts.iter().product();
    let mut points = Vec::with_capacity(total);
    let mut index = vec![0usize; axes.len()];
    for _ in 0..total {
        let u = Vector::from_iterator(axes.len(), index.iter().zip(&axes).map(|(&i, a)| a[i]));
        points.push(ControlAction(u));
        for d in (0..axes.len()).rev() {
            index[d] += 1;
            if index[d] < axes[d].len() {
                break;
            }
            index[d] = 0;
        }
    }

    Ok(ControlGrid {
        lower: lower.to_vec(),
        upper: upper.to_vec(),
        counts: counts.to_vec(),
        points,
    })
}

/// Goodness on the extended reals: `NegInfinity` marks a control predicted
/// to violate a hard constraint and sits below every finite value.
#[derive(Clone, Copy, Debug)]
pub enum GoodnessValue {
    Finite(f64),
    NegInfinity,
}

impl GoodnessValue {
    /// Non-finite or NaN inputs collapse to `NegInfinity`.
    pub fn from_f64(v: f64) -> Self {
        if v.is_finite() {
            GoodnessValue::Finite(v)
        } else {
            GoodnessValue::NegInfinity
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GoodnessValue::Finite(_))
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            GoodnessValue::Finite(v) => v,
            GoodnessValue::NegInfinity => f64::NEG_INFINITY,
        }
    }
}

impl Ord for GoodnessValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use GoodnessValue::*;
        match (self, other) {
            (NegInfinity, NegInfinity) => Ordering::Equal,
            (NegInfinity, Finite(_)) => Ordering::Less,
            (Finite(_), NegInfinity) => Ordering::Greater,
            // Adding zero folds -0.0 into 0.0.
            (Finite(a), Finite(b)) => (a + 0.0).total_cmp(&(b + 0.0)),
        }
    }
}

impl PartialOrd for GoodnessValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for GoodnessValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for GoodnessValue {}

impl std::fmt::Display for GoodnessValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GoodnessValue::Finite(v) => write!(f, "{v:.11e}"),
            GoodnessValue::NegInfinity => f.write_str("-inf"),
        }
    }
}

pub fn goodness_max(a: GoodnessValue, b: GoodnessValue) -> GoodnessValue {
    if b > a {
        b
    } else {
        a
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LearnerConfig {
    /// Control dimension.
    pub m: usize,
    /// Length of one probe interval (s).
    pub epsilon: f64,
    /// Magnitude of the test controls.
    pub delta_probe: f64,
}

impl LearnerConfig {
    pub fn new(m: usize, epsilon: f64, delta_probe: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("control dimension must be >= 1".into()));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!("epsilon {epsilon} must be > 0")));
        }
        if !(delta_probe > 0.0 && delta_probe.is_finite()) {
            return Err(Error::InvalidArgument(format!("probe magnitude {delta_probe} must be > 0")));
        }
        Ok(Self { m, epsilon, delta_probe })
    }

    /// Length of one learning cycle, `(m + 1) * epsilon`.
    pub fn cycle_length(&self) -> f64 {
        (self.m + 1) as f64 * self.epsilon
    }
}

/// Bound `m0` and Lipschitz constant `m1` of the unknown dynamics terms, and
/// the Lipschitz constant of the goodness function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegularityConstants {
    pub m0: f64,
    pub m1: f64,
    pub lipschitz: f64,
}

impl RegularityConstants {
    pub fn new(m0: f64, m1: f64, lipschitz: f64) -> Result<Self> {
        for (name, v) in [("M0", m0), ("M1", m1), ("L", lipschitz)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} = {v} must be > 0")));
            }
        }
        Ok(Self { m0, m1, lipschitz })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NoiseKind {
    None,
    /// Fixed offset added to every observation.
    ConstantOffset(Vector),
    /// Independent per-axis uniform error within the given half-widths.
    BoundedUniform(Vector),
}

/// Observation error model together with its declared 2-norm bound.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    kind: NoiseKind,
    bound: f64,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, bound: f64) -> Result<Self> {
        if !(bound >= 0.0 && bound.is_finite()) {
            return Err(Error::InvalidArgument(format!("error bound {bound} must be >= 0")));
        }
        let size = match &kind {
            NoiseKind::None => 0.0,
            NoiseKind::ConstantOffset(e) => e.norm(),
            NoiseKind::BoundedUniform(w) => {
                if w.iter().any(|v| *v < 0.0) {
                    return Err(Error::InvalidArgument("half-widths must be >= 0".into()));
                }
                w.norm()
            }
        };
        if size > bound * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "noise magnitude {size} exceeds declared bound {bound}"
            )));
        }
        Ok(Self { kind, bound })
    }

    pub fn perfect() -> Self {
        Self {
            kind: NoiseKind::None,
            bound: 0.0,
        }
    }

    pub fn kind(&self) -> &NoiseKind {
        &self.kind
    }

    /// Declared bound on `|x_true - x_obs|`.
    pub fn bound(&self) -> f64 {
        self.bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(grid: &ControlGrid) -> Vec<Vec<f64>> {
        grid.points().iter().map(|p| p.0.iter().copied().collect()).collect()
    }

    #[test]
    fn goodness_max_examples() {
        use GoodnessValue::*;
        assert_eq!(goodness_max(Finite(2.0), Finite(3.0)), Finite(3.0));
        assert_eq!(goodness_max(NegInfinity, Finite(-1e9)), Finite(-1e9));
        assert_eq!(goodness_max(NegInfinity, NegInfinity), NegInfinity);
    }

    #[test]
    fn grid_examples() {
        assert_eq!(pts(&enumerate_grid(&[-1.0], &[1.0], &[3]).unwrap()), vec![vec![-1.0], vec![0.0], vec![1.0]]);
        assert_eq!(
            pts(&enumerate_grid(&[-1.0, -1.0], &[1.0, 1.0], &[2, 2]).unwrap()),
            vec![vec![-1.0, -1.0], vec![-1.0, 1.0], vec![1.0, -1.0], vec![1.0, 1.0]]
        );
        assert_eq!(
            pts(&enumerate_grid(&[0.0], &[4.0], &[5]).unwrap()),
            vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0], vec![4.0]]
        );
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(enumerate_grid(&[0.0], &[1.0], &[1]).is_err());
        assert!(enumerate_grid(&[f64::NAN], &[1.0], &[3]).is_err());
        assert!(enumerate_grid(&[0.0], &[f64::INFINITY], &[3]).is_err());
        assert!(enumerate_grid(&[2.0], &[1.0], &[3]).is_err());
        assert!(enumerate_grid(&[0.0, 0.0], &[1.0], &[3]).is_err());
    }

    #[test]
    fn noise_bound_is_enforced() {
        let e = Vector::from_vec(vec![0.0, 2.0, 0.0, 0.0]);
        assert!(NoiseModel::new(NoiseKind::ConstantOffset(e.clone()), 1.5).is_err());
        assert!(NoiseModel::new(NoiseKind::ConstantOffset(e), 3.0).is_ok());
    }

    #[test]
    fn trajectory_rejects_non_increasing_time() {
        let mut tr = Trajectory::new(State::new(0.0, Vector::zeros(2)).unwrap());
        assert!(tr.push(State::new(0.0, Vector::zeros(2)).unwrap()).is_err());
        assert!(tr.push(State::new(1.0, Vector::zeros(3)).unwrap()).is_err());
        tr.push(State::new(1.0, Vector::zeros(2)).unwrap()).unwrap();
        assert_eq!(tr.len(), 2);
        assert_eq!(tr.truncated(0.5).len(), 1);
    }

    #[test]
    fn state_rejects_non_finite() {
        assert!(State::new(0.0, Vector::from_vec(vec![f64::NAN])).is_err());
        assert!(State::new(-1.0, Vector::zeros(1)).is_err());
    }
}
