//! Ground-truth plants used to generate observations, and the fixed-step RK4
//! integrator that advances them under piecewise-constant control.

use std::ops::ControlFlow;

use nalgebra::{DMatrix, Matrix3, Vector3};
use rand::Rng;

use crate::error::{Error, Result};
use crate::types::{ControlAction, NoiseKind, NoiseModel, State, Vector};

pub trait Dynamics: Send + Sync {
    fn state_dim(&self) -> usize;
    fn control_dim(&self) -> usize;
    fn deriv(&self, x: &Vector, u: &Vector) -> Result<Vector>;
}

fn check_dims(x: &Vector, u: &Vector, n: usize, m: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    if u.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: u.len(),
        });
    }
    Ok(())
}

/// Planar point mass: position `(x1, x2)`, velocity `(x3, x4)`, and the
/// control is the acceleration.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleIntegrator;

impl Dynamics for DoubleIntegrator {
    fn state_dim(&self) -> usize {
        4
    }

    fn control_dim(&self) -> usize {
        2
    }

    fn deriv(&self, x: &Vector, u: &Vector) -> Result<Vector> {
        deriv_double_integrator(x, u)
    }
}

pub fn deriv_double_integrator(x: &Vector, u: &Vector) -> Result<Vector> {
    check_dims(x, u, 4, 2)?;
    Ok(Vector::from_vec(vec![x[2], x[3], u[0], u[1]]))
}

/// `x' = A x + B u`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearPlant {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
}

impl LinearPlant {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>) -> Result<Self> {
        if !a.is_square() || a.nrows() == 0 {
            return Err(Error::InvalidArgument("A must be square and nonempty".into()));
        }
        if b.nrows() != a.nrows() || b.ncols() == 0 {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                found: b.nrows(),
            });
        }
        Ok(Self { a, b })
    }
}

impl Dynamics for LinearPlant {
    fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    fn control_dim(&self) -> usize {
        self.b.ncols()
    }

    fn deriv(&self, x: &Vector, u: &Vector) -> Result<Vector> {
        check_dims(x, u, self.state_dim(), self.control_dim())?;
        Ok(&self.a * x + &self.b * u)
    }
}

/// Gravity potential `V`, with the convention that the acceleration is
/// `+grad V` (so a point mass has `V = mu / |r|`).
#[derive(Clone, Debug, PartialEq)]
pub enum PotentialField {
    PointMass { mu: f64 },
    /// Point mass plus the second-degree (MacCullagh) term
    /// `mu / (2 |r|^5) * (|r|^2 tr C - 3 r^T C r)` for a symmetric
    /// normalized inertia matrix `C` (m^2).
    TriaxialQuadratic { mu: f64, inertia: Matrix3<f64> },
}

impl PotentialField {
    pub fn value(&self, r: &Vector3<f64>) -> Result<f64> {
        let s = r.norm();
        if s == 0.0 {
            return Err(Error::PotentialSingularity);
        }
        Ok(match self {
            PotentialField::PointMass { mu } => mu / s,
            PotentialField::TriaxialQuadratic { mu, inertia } => {
                let q = r.dot(&(inertia * r));
                mu / s + 0.5 * mu * (s * s * inertia.trace() - 3.0 * q) / s.powi(5)
            }
        })
    }

    pub fn gradient(&self, r: &Vector3<f64>) -> Result<Vector3<f64>> {
        let s = r.norm();
        if s == 0.0 {
            return Err(Error::PotentialSingularity);
        }
        let central = |mu: f64| -mu * r / s.powi(3);
        Ok(match self {
            PotentialField::PointMass { mu } => central(*mu),
            PotentialField::TriaxialQuadratic { mu, inertia } => {
                let q = r.dot(&(inertia * r));
                let tr = inertia.trace();
                let s5 = s.powi(5);
                let second = 0.5
                    * mu
                    * (-3.0 * tr / s5 * r - 6.0 / s5 * (inertia * r) + 15.0 * q / (s5 * s * s) * r);
                central(*mu) + second
            }
        })
    }
}

/// Lander dynamics in the body-fixed frame of a body spinning about `z` at
/// `omega` rad/s; state `[r; v]`, control is thrust acceleration.
#[derive(Clone, Debug, PartialEq)]
pub struct AsteroidPlant {
    pub omega: f64,
    pub potential: PotentialField,
    pub perturbation: Vector3<f64>,
}

impl AsteroidPlant {
    pub fn new(omega: f64, potential: PotentialField) -> Result<Self> {
        if !(omega >= 0.0 && omega.is_finite()) {
            return Err(Error::InvalidArgument(format!("rotation rate {omega} must be >= 0")));
        }
        Ok(Self {
            omega,
            potential,
            perturbation: Vector3::zeros(),
        })
    }
}

impl Dynamics for AsteroidPlant {
    fn state_dim(&self) -> usize {
        6
    }

    fn control_dim(&self) -> usize {
        3
    }

    fn deriv(&self, x: &Vector, u: &Vector) -> Result<Vector> {
        deriv_asteroid(self, x, u)
    }
}

pub fn deriv_asteroid(plant: &AsteroidPlant, x: &Vector, u: &Vector) -> Result<Vector> {
    check_dims(x, u, 6, 3)?;
    let r = Vector3::new(x[0], x[1], x[2]);
    let grad = plant.potential.gradient(&r)?;
    let w = plant.omega;
    let p = &plant.perturbation;
    Ok(Vector::from_vec(vec![
        x[3],
        x[4],
        x[5],
        2.0 * w * x[4] + w * w * x[0] + grad[0] + u[0] + p[0],
        -2.0 * w * x[3] + w * w * x[1] + grad[1] + u[1] + p[1],
        grad[2] + u[2] + p[2],
    ]))
}

/// Any of the bundled plants.
#[derive(Clone, Debug, PartialEq)]
pub enum Plant {
    DoubleIntegrator(DoubleIntegrator),
    Asteroid(AsteroidPlant),
    Linear(LinearPlant),
}

impl Dynamics for Plant {
    fn state_dim(&self) -> usize {
        match self {
            Plant::DoubleIntegrator(p) => p.state_dim(),
            Plant::Asteroid(p) => p.state_dim(),
            Plant::Linear(p) => p.state_dim(),
        }
    }

    fn control_dim(&self) -> usize {
        match self {
            Plant::DoubleIntegrator(p) => p.control_dim(),
            Plant::Asteroid(p) => p.control_dim(),
            Plant::Linear(p) => p.control_dim(),
        }
    }

    fn deriv(&self, x: &Vector, u: &Vector) -> Result<Vector> {
        match self {
            Plant::DoubleIntegrator(p) => p.deriv(x, u),
            Plant::Asteroid(p) => p.deriv(x, u),
            Plant::Linear(p) => p.deriv(x, u),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    /// Step size (s).
    pub h: f64,
}

impl IntegratorConfig {
    pub fn new(h: f64) -> Result<Self> {
        if h > 0.0 && h.is_finite() {
            Ok(Self { h })
        } else {
            Err(Error::InvalidArgument(format!("step size {h} must be > 0")))
        }
    }

    /// Number of whole steps in `duration`, which must be a multiple of `h`.
    pub fn steps_in(&self, duration: f64) -> Result<usize> {
        if !(duration >= 0.0) {
            return Err(Error::InvalidArgument(format!("duration {duration} must be >= 0")));
        }
        let n = (duration / self.h).round();
        if (n * self.h - duration).abs() > 1e-9 * duration.max(self.h) {
            return Err(Error::InvalidArgument(format!(
                "duration {duration} is not a multiple of the step {}",
                self.h
            )));
        }
        Ok(n as usize)
    }
}

pub fn rk4_step(dynamics: &dyn Dynamics, x: &Vector, u: &Vector, h: f64) -> Result<Vector> {
    let k1 = dynamics.deriv(x, u)?;
    let k2 = dynamics.deriv(&(x + &k1 * (0.5 * h)), u)?;
    let k3 = dynamics.deriv(&(x + &k2 * (0.5 * h)), u)?;
    let k4 = dynamics.deriv(&(x + &k3 * h), u)?;
    Ok(x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))
}

/// Holds `u` for `duration` seconds, calling `on_step(prev, next)` after every
/// RK4 step. Returns the final state, or the state at which `on_step` broke.
pub fn integrate<F>(
    dynamics: &dyn Dynamics,
    x0: &State,
    u: &ControlAction,
    cfg: &IntegratorConfig,
    duration: f64,
    mut on_step: F,
) -> Result<ControlFlow<State, State>>
where
    F: FnMut(&State, &State) -> ControlFlow<()>,
{
    let steps = cfg.steps_in(duration)?;
    let mut current = x0.clone();
    for k in 1..=steps {
        let x = rk4_step(dynamics, &current.x, &u.0, cfg.h)?;
        let t = x0.t + k as f64 * cfg.h;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t });
        }
        let next = State { t, x };
        if on_step(&current, &next).is_break() {
            return Ok(ControlFlow::Break(next));
        }
        current = next;
    }
    Ok(ControlFlow::Continue(current))
}

pub fn step(
    dynamics: &dyn Dynamics,
    x: &State,
    u: &ControlAction,
    cfg: &IntegratorConfig,
    duration: f64,
) -> Result<State> {
    match integrate(dynamics, x, u, cfg, duration, |_, _| ControlFlow::Continue(()))? {
        ControlFlow::Continue(s) | ControlFlow::Break(s) => Ok(s),
    }
}

/// Noisy observation of `x_true`; never further than the declared bound.
pub fn observe<R: Rng + ?Sized>(x_true: &State, noise: &NoiseModel, rng: &mut R) -> State {
    let x = match noise.kind() {
        NoiseKind::None => x_true.x.clone(),
        NoiseKind::ConstantOffset(e) => &x_true.x + e,
        NoiseKind::BoundedUniform(w) => {
            let mut x = x_true.x.clone();
            for (xi, wi) in x.iter_mut().zip(w.iter()) {
                if *wi > 0.0 {
                    *xi += rng.gen_range(-*wi..=*wi);
                }
            }
            x
        }
    };
    State { t: x_true.t, x }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(x: &[f64]) -> Vector {
        Vector::from_column_slice(x)
    }

    #[test]
    fn double_integrator_examples() {
        assert_eq!(deriv_double_integrator(&v(&[0.0, 0.0, 1.0, 2.0]), &v(&[0.0, 0.0])).unwrap(), v(&[1.0, 2.0, 0.0, 0.0]));
        assert_eq!(deriv_double_integrator(&Vector::zeros(4), &v(&[3.0, -1.0])).unwrap(), v(&[0.0, 0.0, 3.0, -1.0]));
        assert_eq!(deriv_double_integrator(&Vector::zeros(4), &Vector::zeros(2)).unwrap(), Vector::zeros(4));
        assert!(deriv_double_integrator(&Vector::zeros(3), &Vector::zeros(2)).is_err());
    }

    #[test]
    fn asteroid_examples() {
        let p = AsteroidPlant::new(0.0, PotentialField::PointMass { mu: 1.0 }).unwrap();
        let d = deriv_asteroid(&p, &v(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]), &Vector::zeros(3)).unwrap();
        assert_abs_diff_eq!(d, v(&[0.0, 0.0, 0.0, -1.0, 0.0, 0.0]), epsilon = 1e-15);

        let p = AsteroidPlant::new(1.0, PotentialField::PointMass { mu: 0.0 }).unwrap();
        let d = deriv_asteroid(&p, &v(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]), &Vector::zeros(3)).unwrap();
        assert_abs_diff_eq!(d, v(&[0.0, 1.0, 0.0, 3.0, 0.0, 0.0]), epsilon = 1e-15);

        let p = AsteroidPlant::new(0.0, PotentialField::PointMass { mu: 0.0 }).unwrap();
        let d = deriv_asteroid(&p, &v(&[5.0, 1.0, 2.0, 0.0, 0.0, 0.0]), &v(&[0.0, 0.0, -1.0])).unwrap();
        assert_eq!(d.as_slice()[3..], [0.0, 0.0, -1.0]);

        let p = AsteroidPlant::new(0.0, PotentialField::PointMass { mu: 1.0 }).unwrap();
        assert!(matches!(
            deriv_asteroid(&p, &Vector::zeros(6), &Vector::zeros(3)),
            Err(Error::PotentialSingularity)
        ));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let inertia = Matrix3::new(900.0, 30.0, 0.0, 30.0, 700.0, -20.0, 0.0, -20.0, 500.0);
        let fields = [
            PotentialField::PointMass { mu: 5.2 },
            PotentialField::TriaxialQuadratic { mu: 5.2, inertia },
        ];
        let r = Vector3::new(120.0, -80.0, 230.0);
        for f in &fields {
            let g = f.gradient(&r).unwrap();
            for i in 0..3 {
                let h = 1e-3;
                let mut rp = r;
                let mut rm = r;
                rp[i] += h;
                rm[i] -= h;
                let fd = (f.value(&rp).unwrap() - f.value(&rm).unwrap()) / (2.0 * h);
                assert!((fd - g[i]).abs() <= 1e-6 * g.norm(), "{f:?} axis {i}: {fd} vs {}", g[i]);
            }
        }
    }

    #[test]
    fn step_examples() {
        let growth = LinearPlant::new(DMatrix::from_element(1, 1, 1.0), DMatrix::zeros(1, 1)).unwrap();
        let cfg = IntegratorConfig::new(0.01).unwrap();
        let x0 = State::new(0.0, v(&[1.0])).unwrap();
        let x1 = step(&growth, &x0, &ControlAction::zeros(1), &cfg, 1.0).unwrap();
        assert_abs_diff_eq!(x1.x[0], std::f64::consts::E, epsilon = 1e-6);

        let x0 = State::new(0.0, Vector::zeros(4)).unwrap();
        let x2 = step(&DoubleIntegrator, &x0, &ControlAction::from_slice(&[1.0, 0.0]), &cfg, 2.0).unwrap();
        assert_abs_diff_eq!(x2.x, v(&[2.0, 0.0, 2.0, 0.0]), epsilon = 1e-12);

        let same = step(&DoubleIntegrator, &x0, &ControlAction::zeros(2), &cfg, 0.0).unwrap();
        assert_eq!(same, x0);

        assert!(step(&DoubleIntegrator, &x0, &ControlAction::zeros(2), &cfg, 0.015).is_err());
    }

    #[test]
    fn divergence_is_reported() {
        let blowup = LinearPlant::new(DMatrix::from_element(1, 1, 1e3), DMatrix::zeros(1, 1)).unwrap();
        let cfg = IntegratorConfig::new(0.1).unwrap();
        let x0 = State::new(0.0, v(&[1.0])).unwrap();
        let err = step(&blowup, &x0, &ControlAction::zeros(1), &cfg, 100.0).unwrap_err();
        assert!(matches!(err, Error::Divergence { .. }));
    }

    #[test]
    fn observe_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = State::new(3.0, v(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(observe(&x, &NoiseModel::perfect(), &mut rng), x);

        let e = NoiseModel::new(NoiseKind::ConstantOffset(v(&[0.0, 1.0, 0.0, 0.0])), 1.0).unwrap();
        assert_eq!(observe(&x, &e, &mut rng).x, v(&[1.0, 3.0, 3.0, 4.0]));

        let w = v(&[0.1, 0.2, 0.0, 0.3]);
        let bound = w.norm();
        let uni = NoiseModel::new(NoiseKind::BoundedUniform(w), bound).unwrap();
        let violations = (0..10_000)
            .filter(|_| (observe(&x, &uni, &mut rng).x - &x.x).norm() > bound)
            .count();
        assert_eq!(violations, 0);
    }
}
