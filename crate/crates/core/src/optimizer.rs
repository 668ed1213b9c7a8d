//! Control selection over the grid: the nominal arg-max, and the robust
//! max-min over hypothesis trajectories consistent with the observation
//! error bound.

use crate::error::{Error, Result};
use crate::goodness::GoodnessFn;
use crate::learner::{estimate_direction, LearnedDirection};
use crate::types::{ControlAction, ControlGrid, GoodnessValue, Trajectory, Vector};

/// Constant state offsets `w` with `|w| <= delta`, each standing for the
/// hypothesis trajectory `phi_obs + w`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationSet {
    offsets: Vec<Vector>,
}

impl PerturbationSet {
    pub fn new(offsets: Vec<Vector>) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::EmptyPerturbationSet);
        }
        let n = offsets[0].len();
        if let Some(w) = offsets.iter().find(|w| w.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w.len(),
            });
        }
        Ok(Self { offsets })
    }

    /// The degenerate set `{0}`.
    pub fn zero(n: usize) -> Self {
        Self {
            offsets: vec![Vector::zeros(n)],
        }
    }

    pub fn offsets(&self) -> &[Vector] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }
}

/// Product of `samples` evenly spaced values in `[-a, a]`,
/// `a = delta / sqrt(|axes|)`, on each listed axis of an `n`-dimensional
/// state. With an odd sample count the zero offset is always present, and the
/// per-axis scaling keeps every corner inside the `delta` ball.
pub fn make_perturbation_set(delta: f64, axes: &[usize], samples: usize, n: usize) -> Result<PerturbationSet> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta {delta} must be >= 0")));
    }
    if samples.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "samples per axis must be odd so that zero is included, got {samples}"
        )));
    }
    if let Some(&a) = axes.iter().find(|&&a| a >= n) {
        return Err(Error::InvalidArgument(format!("axis {a} out of range for dimension {n}")));
    }
    if delta == 0.0 || axes.is_empty() || samples == 1 {
        return Ok(PerturbationSet::zero(n));
    }

    let half = delta / (axes.len() as f64).sqrt();
    let values: Vec<f64> = (0..samples)
        .map(|i| {
            if 2 * i + 1 == samples {
                0.0
            } else {
                -half + 2.0 * half * i as f64 / (samples - 1) as f64
            }
        })
        .collect();

    let total = samples.pow(axes.len() as u32);
    let mut offsets = Vec::with_capacity(total);
    let mut index = vec![0usize; axes.len()];
    for _ in 0..total {
        let mut w = Vector::zeros(n);
        for (k, &axis) in axes.iter().enumerate() {
            w[axis] = values[index[k]];
        }
        offsets.push(w);
        for d in (0..axes.len()).rev() {
            index[d] += 1;
            if index[d] < samples {
                break;
            }
            index[d] = 0;
        }
    }
    Ok(PerturbationSet { offsets })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decision {
    pub control: ControlAction,
    pub value: GoodnessValue,
    /// Grid index of the chosen control.
    pub index: usize,
    /// Offset index attaining the worst case for the chosen control.
    pub worst_offset: usize,
    /// Worst-case value per grid control, in grid order.
    pub table: Vec<GoodnessValue>,
}

pub fn nominal_select(
    grid: &ControlGrid,
    goodness: &dyn GoodnessFn,
    phi_obs: &Trajectory,
    ld: &LearnedDirection,
) -> Result<Decision> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let table = evaluate_all(grid.points(), |u| {
        let v = estimate_direction(ld, u)?;
        Ok((goodness.evaluate(phi_obs, &v), 0))
    })?;
    Ok(pick(grid, table))
}

pub fn robust_select(
    grid: &ControlGrid,
    goodness: &dyn GoodnessFn,
    phi_obs: &Trajectory,
    ld: &LearnedDirection,
    pset: &PerturbationSet,
) -> Result<Decision> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if pset.is_empty() {
        return Err(Error::EmptyPerturbationSet);
    }
    // Each hypothesis shifts both the trajectory and the probe states the
    // direction is re-learned from.
    let hypotheses: Vec<(Trajectory, LearnedDirection)> = pset
        .offsets()
        .iter()
        .map(|w| {
            if w.iter().all(|c| *c == 0.0) {
                (phi_obs.clone(), ld.clone())
            } else {
                (phi_obs.shifted(w), ld.shifted(w))
            }
        })
        .collect();

    let table = evaluate_all(grid.points(), |u| {
        let mut worst: Option<(GoodnessValue, usize)> = None;
        for (k, (phi, ld_w)) in hypotheses.iter().enumerate() {
            let v = estimate_direction(ld_w, u)?;
            let g = goodness.evaluate(phi, &v);
            if worst.is_none_or(|(w, _)| g < w) {
                worst = Some((g, k));
            }
        }
        Ok(worst.expect("perturbation set is nonempty"))
    })?;
    Ok(pick(grid, table))
}

/// First arg-max in grid order of a precomputed `(value, worst_offset)` table.
fn pick(grid: &ControlGrid, table: Vec<(GoodnessValue, usize)>) -> Decision {
    let mut best = 0;
    for (i, entry) in table.iter().enumerate().skip(1) {
        if entry.0 > table[best].0 {
            best = i;
        }
    }
    Decision {
        control: grid.points()[best].clone(),
        value: table[best].0,
        index: best,
        worst_offset: table[best].1,
        table: table.into_iter().map(|(g, _)| g).collect(),
    }
}

#[cfg(feature = "parallel")]
fn evaluate_all<F>(points: &[ControlAction], f: F) -> Result<Vec<(GoodnessValue, usize)>>
where
    F: Fn(&ControlAction) -> Result<(GoodnessValue, usize)> + Sync + Send,
{
    use rayon::prelude::*;
    points.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate_all<F>(points: &[ControlAction], f: F) -> Result<Vec<(GoodnessValue, usize)>>
where
    F: Fn(&ControlAction) -> Result<(GoodnessValue, usize)>,
{
    points.iter().map(f).collect()
}
