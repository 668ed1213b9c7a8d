//! Goodness functions `G(phi, v)`: a score for the observed trajectory so far
//! together with a candidate instantaneous direction `v`, where a hard
//! constraint violation is scored `NegInfinity`.

use crate::error::{Error, Result};
use crate::learner::{estimate_direction, LearnedDirection};
use crate::safety::{reach_overapprox, tube_intersects, SurfaceModel, UnsafeSet};
use crate::types::{ControlAction, GoodnessValue, RegularityConstants, Trajectory, Vector};

pub trait GoodnessFn: Send + Sync {
    fn evaluate(&self, phi: &Trajectory, v: &Vector) -> GoodnessValue;

    /// Declared Lipschitz constant with respect to the trajectory metric
    /// plus the velocity norm, if known.
    fn lipschitz(&self) -> Option<f64> {
        None
    }
}

/// Wraps a closure as a goodness function.
pub struct FnGoodness<F>(pub F);

impl<F> GoodnessFn for FnGoodness<F>
where
    F: Fn(&Trajectory, &Vector) -> GoodnessValue + Send + Sync,
{
    fn evaluate(&self, phi: &Trajectory, v: &Vector) -> GoodnessValue {
        (self.0)(phi, v)
    }
}

/// How a candidate control is screened against the unsafe set.
#[derive(Clone, Debug, PartialEq)]
pub enum SafetyCheck {
    /// Dynamics assumed frozen: only the predicted point is tested.
    Forward,
    /// Dynamics assumed frozen: the predicted path is tested at `steps`
    /// evenly spaced instants ending at the look-ahead point.
    Path { steps: usize },
    /// Dynamics may drift within the Lipschitz class: the whole reach tube
    /// over the look-ahead is tested.
    ReachTube {
        consts: RegularityConstants,
        m: usize,
        u_max: f64,
        delta: f64,
        steps: usize,
    },
}

/// `|T1 - T2| + max |phi1(t) - phi2(t)|` over sample instants shared by both
/// trajectories up to `min(T1, T2)`.
pub fn trajectory_distance(phi1: &Trajectory, phi2: &Trajectory) -> Result<f64> {
    if phi1.dim() != phi2.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi1.dim(),
            found: phi2.dim(),
        });
    }
    let t_end = phi1.horizon().min(phi2.horizon());
    let (a, b) = (phi1.samples(), phi2.samples());
    let (mut i, mut j) = (0, 0);
    let mut sup = 0.0_f64;
    while i < a.len() && j < b.len() {
        let (ta, tb) = (a[i].t, b[j].t);
        if ta > t_end || tb > t_end {
            break;
        }
        if (ta - tb).abs() <= 1e-12 * (1.0 + ta.abs()) {
            sup = sup.max((&a[i].x - &b[j].x).norm());
            i += 1;
            j += 1;
        } else if ta < tb {
            i += 1;
        } else {
            j += 1;
        }
    }
    Ok((phi1.horizon() - phi2.horizon()).abs() + sup)
}

/// Position after `dt` seconds of constant-acceleration flight.
pub fn predict_position(r: &[f64], v: &[f64], a: &[f64], dt: f64) -> Vector {
    Vector::from_iterator(r.len(), (0..r.len()).map(|i| r[i] + dt * v[i] + 0.5 * dt * dt * a[i]))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeToGo {
    /// Predicted surface crossing after this many seconds.
    Hit(f64),
    /// No crossing before the cap; carries the scan time of closest approach
    /// to the target.
    NoHit(f64),
}

/// Finds when the constant-acceleration prediction first meets `surface`.
/// The parabola is scanned at `dt_scan` and the first crossing refined by
/// bisection.
pub fn estimate_tgo(
    r: &[f64],
    v: &[f64],
    a: &[f64],
    surface: &SurfaceModel,
    t_max: f64,
    dt_scan: f64,
    target: &[f64],
) -> TimeToGo {
    let sd = |s: f64| surface.signed_distance(predict_position(r, v, a, s).as_slice());
    if sd(0.0) <= 0.0 {
        return TimeToGo::Hit(0.0);
    }
    let dist2 = |s: f64| {
        let p = predict_position(r, v, a, s);
        (0..target.len()).map(|i| (p[i] - target[i]).powi(2)).sum::<f64>()
    };

    let mut best = (dist2(0.0), 0.0);
    let mut prev = 0.0;
    let mut k = 1usize;
    loop {
        let s = (k as f64 * dt_scan).min(t_max);
        if sd(s) <= 0.0 {
            let (mut lo, mut hi) = (prev, s);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let d = sd(mid);
                if d.abs() <= 1e-6 {
                    return TimeToGo::Hit(mid);
                }
                if d > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= f64::EPSILON * hi.max(1.0) {
                    break;
                }
            }
            return TimeToGo::Hit(hi);
        }
        let d2 = dist2(s);
        if d2 < best.0 {
            best = (d2, s);
        }
        if s >= t_max {
            return TimeToGo::NoHit(best.1);
        }
        prev = s;
        k += 1;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstacleGoodnessConfig {
    pub target: Vec<f64>,
    pub obstacle_ref: Vec<f64>,
    pub tau: f64,
    pub predict_dt: f64,
}

/// Reach-the-target score with an inverse-square obstacle repulsion, for
/// states laid out as `[position; velocity]`.
#[derive(Clone, Debug)]
pub struct ObstacleGoodness {
    pub cfg: ObstacleGoodnessConfig,
    pub unsafe_set: UnsafeSet,
    pub safety: SafetyCheck,
}

impl ObstacleGoodness {
    pub fn new(cfg: ObstacleGoodnessConfig, unsafe_set: UnsafeSet) -> Result<Self> {
        if cfg.target.len() != cfg.obstacle_ref.len() || cfg.target.len() < unsafe_set.position_dim() {
            return Err(Error::DimensionMismatch {
                expected: unsafe_set.position_dim(),
                found: cfg.target.len(),
            });
        }
        if !(cfg.tau >= 0.0) || !(cfg.predict_dt > 0.0) {
            return Err(Error::InvalidArgument("need tau >= 0 and predict_dt > 0".into()));
        }
        Ok(Self {
            cfg,
            unsafe_set,
            safety: SafetyCheck::Forward,
        })
    }

    pub fn with_safety(mut self, safety: SafetyCheck) -> Self {
        self.safety = safety;
        self
    }
}

impl GoodnessFn for ObstacleGoodness {
    fn evaluate(&self, phi: &Trajectory, v: &Vector) -> GoodnessValue {
        let x = phi.last();
        let d = self.cfg.target.len();
        let xs = x.x.as_slice();
        let r_p = predict_position(&xs[..d], &xs[d..2 * d], &v.as_slice()[d..2 * d], self.cfg.predict_dt);

        let unsafe_hit = match &self.safety {
            SafetyCheck::Forward => self.unsafe_set.contains_position(r_p.as_slice()),
            SafetyCheck::Path { steps } => path_hits(
                &self.unsafe_set,
                &xs[..d],
                &xs[d..2 * d],
                &v.as_slice()[d..2 * d],
                self.cfg.predict_dt,
                *steps,
            ),
            SafetyCheck::ReachTube {
                consts,
                m,
                u_max,
                delta,
                steps,
            } => match reach_overapprox(x, v, consts, *m, *u_max, *delta, self.cfg.predict_dt, *steps) {
                Ok(tube) => tube_intersects(&tube, &self.unsafe_set),
                Err(_) => true,
            },
        };
        if unsafe_hit {
            return GoodnessValue::NegInfinity;
        }
        let to_target = dist2(r_p.as_slice(), &self.cfg.target);
        let to_obstacle = dist2(r_p.as_slice(), &self.cfg.obstacle_ref);
        GoodnessValue::from_f64(-to_target - self.cfg.tau / to_obstacle)
    }
}

/// Whether the constant-acceleration path from `r` hits `set` at any of
/// `steps` evenly spaced instants in `(0, dt]`.
fn path_hits(set: &UnsafeSet, r: &[f64], v: &[f64], a: &[f64], dt: f64, steps: usize) -> bool {
    let steps = steps.max(1);
    (1..=steps).any(|k| {
        let p = predict_position(r, v, a, dt * k as f64 / steps as f64);
        set.contains_position(p.as_slice())
    })
}

pub fn obstacle_goodness(
    goodness: &ObstacleGoodness,
    phi: &Trajectory,
    ld: &LearnedDirection,
    u: &ControlAction,
) -> Result<GoodnessValue> {
    let v = estimate_direction(ld, u)?;
    Ok(goodness.evaluate(phi, &v))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LandingGoodnessConfig {
    pub target: [f64; 3],
    pub obstacle_center: [f64; 3],
    pub obstacle_radius: f64,
    pub tau: f64,
    pub t_max: f64,
    /// Offset `t' - t` of the collision look-ahead (s).
    pub collision_check_dt: f64,
    pub dt_scan: f64,
}

/// Touchdown-accuracy score for a lander with state `[r; v]` in R^6.
#[derive(Clone, Debug)]
pub struct LandingGoodness {
    pub cfg: LandingGoodnessConfig,
    pub surface: SurfaceModel,
    pub obstacle: UnsafeSet,
    pub safety: SafetyCheck,
}

impl LandingGoodness {
    pub fn new(cfg: LandingGoodnessConfig, surface: SurfaceModel) -> Result<Self> {
        if !(cfg.t_max > 0.0) || !(cfg.collision_check_dt > 0.0) || !(cfg.dt_scan > 0.0) || !(cfg.tau >= 0.0) {
            return Err(Error::InvalidArgument(
                "need t_max, collision_check_dt, dt_scan > 0 and tau >= 0".into(),
            ));
        }
        surface.validate()?;
        let obstacle = UnsafeSet::sphere(cfg.obstacle_center, cfg.obstacle_radius)?;
        Ok(Self {
            cfg,
            surface,
            obstacle,
            safety: SafetyCheck::Forward,
        })
    }

    pub fn with_safety(mut self, safety: SafetyCheck) -> Self {
        self.safety = safety;
        self
    }

    /// Flight-time estimate for the prediction starting at the last state of
    /// `phi` under direction `v`.
    pub fn time_to_go(&self, phi: &Trajectory, v: &Vector) -> TimeToGo {
        let xs = phi.last().x.as_slice();
        estimate_tgo(
            &xs[..3],
            &xs[3..6],
            &v.as_slice()[3..6],
            &self.surface,
            self.cfg.t_max,
            self.cfg.dt_scan,
            &self.cfg.target,
        )
    }
}

impl GoodnessFn for LandingGoodness {
    fn evaluate(&self, phi: &Trajectory, v: &Vector) -> GoodnessValue {
        let x = phi.last();
        let xs = x.x.as_slice();
        let (r, vel, a) = (&xs[..3], &xs[3..6], &v.as_slice()[3..6]);
        let tgo = self.time_to_go(phi, v);

        // The look-ahead point never extends past the predicted touchdown.
        let t_check = match tgo {
            TimeToGo::Hit(t) => self.cfg.collision_check_dt.min(t),
            TimeToGo::NoHit(_) => self.cfg.collision_check_dt,
        };
        let r_check = predict_position(r, vel, a, t_check);
        let unsafe_hit = match &self.safety {
            SafetyCheck::Forward => self.obstacle.contains_position(r_check.as_slice()),
            SafetyCheck::Path { steps } => path_hits(&self.obstacle, r, vel, a, t_check, *steps),
            SafetyCheck::ReachTube {
                consts,
                m,
                u_max,
                delta,
                steps,
            } => match reach_overapprox(x, v, consts, *m, *u_max, *delta, t_check.max(1e-9), *steps) {
                Ok(tube) => tube_intersects(&tube, &self.obstacle),
                Err(_) => true,
            },
        };
        if unsafe_hit {
            return GoodnessValue::NegInfinity;
        }

        let miss = match tgo {
            TimeToGo::Hit(t) | TimeToGo::NoHit(t) => dist2(predict_position(r, vel, a, t).as_slice(), &self.cfg.target),
        };
        let to_obstacle = dist2(r_check.as_slice(), &self.cfg.obstacle_center);
        GoodnessValue::from_f64(-miss - self.cfg.tau / to_obstacle)
    }
}

pub fn landing_goodness(
    goodness: &LandingGoodness,
    phi: &Trajectory,
    ld: &LearnedDirection,
    u: &ControlAction,
) -> Result<GoodnessValue> {
    let v = estimate_direction(ld, u)?;
    Ok(goodness.evaluate(phi, &v))
}

/// `-|x + horizon * v - target|`: steer the state towards a set point. It is
/// Lipschitz with constant `max(1, horizon)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrackingGoodness {
    pub target: Vector,
    pub horizon: f64,
}

impl GoodnessFn for TrackingGoodness {
    fn evaluate(&self, phi: &Trajectory, v: &Vector) -> GoodnessValue {
        let x = &phi.last().x;
        GoodnessValue::from_f64(-(x + v * self.horizon - &self.target).norm())
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(self.horizon.max(1.0))
    }
}

fn dist2(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).powi(2)).sum()
}
