use std::f64::consts::PI;

use myopic::goodness::{
    estimate_tgo, predict_position, trajectory_distance, GoodnessFn, LandingGoodness, LandingGoodnessConfig,
    ObstacleGoodness, ObstacleGoodnessConfig, TimeToGo,
};
use myopic::plants::{step, Dynamics, IntegratorConfig};
use myopic::safety::{SurfaceModel, UnsafeSet};
use myopic::{ControlAction, GoodnessValue, Result, State, Trajectory, Vector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `r' = v, v' = a` in three dimensions with a fixed `a`.
struct ConstantAcceleration([f64; 3]);

impl Dynamics for ConstantAcceleration {
    fn state_dim(&self) -> usize {
        6
    }

    fn control_dim(&self) -> usize {
        1
    }

    fn deriv(&self, x: &Vector, _u: &Vector) -> Result<Vector> {
        let a = self.0;
        Ok(Vector::from_vec(vec![x[3], x[4], x[5], a[0], a[1], a[2]]))
    }
}

fn at_rest(x: &[f64]) -> Trajectory {
    Trajectory::new(State::new(0.0, Vector::from_column_slice(x)).unwrap())
}

fn example1_goodness(tau: f64) -> ObstacleGoodness {
    ObstacleGoodness::new(
        ObstacleGoodnessConfig {
            target: vec![0.0, 0.0],
            obstacle_ref: vec![50.0, 0.0],
            tau,
            predict_dt: 0.6,
        },
        UnsafeSet::semi_disk([50.0, 0.0], 15.0).unwrap(),
    )
    .unwrap()
}

fn landing(tau: f64, surface: SurfaceModel, center: [f64; 3], radius: f64) -> LandingGoodness {
    LandingGoodness::new(
        LandingGoodnessConfig {
            target: [0.0, 0.0, 0.0],
            obstacle_center: center,
            obstacle_radius: radius,
            tau,
            t_max: 300.0,
            collision_check_dt: 1.0,
            dt_scan: 0.5,
        },
        surface,
    )
    .unwrap()
}

#[test]
fn prediction_matches_rk4() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let r: Vec<f64> = (0..3).map(|_| rng.gen_range(-100.0..100.0)).collect();
        let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let a = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let dt = rng.gen_range(0.1..10.0_f64);
        let cfg = IntegratorConfig::new(dt / 200.0).unwrap();
        let x0 = State::new(0.0, Vector::from_iterator(6, r.iter().chain(&v).copied())).unwrap();
        let end = step(&ConstantAcceleration(a), &x0, &ControlAction::zeros(1), &cfg, dt).unwrap();
        let predicted = predict_position(&r, &v, &a, dt);
        for i in 0..3 {
            let scale = predicted[i].abs().max(1.0);
            assert!((end.x[i] - predicted[i]).abs() / scale <= 1e-9);
        }
    }
}

#[test]
fn obstacle_goodness_is_negative_infinity_exactly_inside() {
    let g = example1_goodness(150.0);
    let still = Vector::zeros(4);
    let inside = |p: [f64; 2]| (p[0] - 50.0).powi(2) + p[1].powi(2) <= 225.0 && p[1] >= 0.0;
    let mut points = Vec::new();
    for k in 1..200 {
        let theta = PI * k as f64 / 200.0;
        for dr in [-1e-6, 1e-6] {
            let rr = 15.0 + dr;
            points.push([50.0 + rr * theta.cos(), rr * theta.sin()]);
        }
    }
    for k in 1..200 {
        let x = 35.0 + 30.0 * k as f64 / 200.0;
        points.push([x, 1e-6]);
        points.push([x, -1e-6]);
    }
    for p in points {
        let value = g.evaluate(&at_rest(&[p[0], p[1], 0.0, 0.0]), &still);
        assert_eq!(value == GoodnessValue::NegInfinity, inside(p), "at {p:?}");
    }
}

#[test]
fn landing_goodness_is_negative_infinity_exactly_inside() {
    let center = [14.0, -23.0, 250.0];
    let g = landing(15000.0, SurfaceModel::Plane { height: -1000.0 }, center, 15.0);
    let still = Vector::zeros(6);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..500 {
        let dir = Vector::from_iterator(3, (0..3).map(|_| rng.gen_range(-1.0..1.0_f64))).normalize();
        for dr in [-1e-6, 1e-6] {
            let p: Vec<f64> = (0..3).map(|i| center[i] + (15.0 + dr) * dir[i]).collect();
            let inside = (0..3).map(|i| (p[i] - center[i]).powi(2)).sum::<f64>().sqrt() <= 15.0;
            let value = g.evaluate(&at_rest(&[p[0], p[1], p[2], 0.0, 0.0, 0.0]), &still);
            assert_eq!(value == GoodnessValue::NegInfinity, inside);
        }
    }
}

#[test]
fn obstacle_goodness_is_locally_lipschitz() {
    let g = example1_goodness(150.0);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let h = 1e-4;
    let still = Vector::zeros(4);
    let mut checked = 0;
    while checked < 500 {
        let p = [rng.gen_range(-20.0..120.0), rng.gen_range(-40.0..40.0)];
        let q = [p[0] + h * rng.gen_range(-1.0..1.0), p[1] + h * rng.gen_range(-1.0..1.0)];
        let (a, b) = (
            g.evaluate(&at_rest(&[p[0], p[1], 0.0, 0.0]), &still),
            g.evaluate(&at_rest(&[q[0], q[1], 0.0, 0.0]), &still),
        );
        let (GoodnessValue::Finite(a), GoodnessValue::Finite(b)) = (a, b) else {
            continue;
        };
        let d_ref = ((p[0] - 50.0).powi(2) + p[1].powi(2)).sqrt();
        if d_ref < 1.0 {
            continue;
        }
        // |grad| <= 2|r - r_f| + 2 tau / |r - r_B|^3, padded for the step.
        let c = 2.0 * (p[0].hypot(p[1]) + 1.0) + 2.0 * 150.0 / (d_ref - 1e-3).powi(3);
        assert!((a - b).abs() <= c * h * 2f64.sqrt());
        checked += 1;
    }
}

#[test]
fn no_hit_matches_fine_scan() {
    let surface = SurfaceModel::Sphere {
        center: [0.0, 0.0, 0.0],
        radius: 244.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let target = [-26.0, 0.0, 243.0];
    for _ in 0..50 {
        // Start above the surface moving outward so the parabola never lands.
        let dir = Vector::from_iterator(3, (0..3).map(|_| rng.gen_range(-1.0..1.0_f64))).normalize();
        let r: Vec<f64> = (0..3).map(|i| dir[i] * rng.gen_range(260.0..400.0)).collect();
        let v: Vec<f64> = (0..3).map(|i| dir[i] * rng.gen_range(0.01..0.5) + rng.gen_range(-0.05..0.05)).collect();
        let a: Vec<f64> = (0..3).map(|i| dir[i] * 1e-3).collect();
        let dt_scan = 0.5;
        let t_max = 300.0;
        let tgo = estimate_tgo(&r, &v, &a, &surface, t_max, dt_scan, &target);
        let TimeToGo::NoHit(t_best) = tgo else {
            panic!("outward motion should not land: {tgo:?}");
        };
        let d2 = |s: f64| {
            let p = predict_position(&r, &v, &a, s);
            (0..3).map(|i| (p[i] - target[i]).powi(2)).sum::<f64>()
        };
        let fine_min = (0..=(t_max / (dt_scan / 10.0)) as usize)
            .map(|k| d2(k as f64 * dt_scan / 10.0))
            .fold(f64::INFINITY, f64::min);
        // Coarse scan may miss the true minimum by one half step of motion.
        let speed = v.iter().map(|c| c * c).sum::<f64>().sqrt() + 1e-3 * t_max;
        let slack = 2.0 * fine_min.sqrt() * speed * dt_scan + (speed * dt_scan).powi(2);
        assert!(d2(t_best) <= fine_min + slack);
        assert!(d2(t_best) >= fine_min - 1e-9);
    }
}

#[test]
fn landing_examples() {
    let far = [1000.0, 0.0, 0.0];
    // Touchdown exactly on the target: only the repulsion term remains.
    let g = landing(1.0, SurfaceModel::Plane { height: 0.0 }, far, 1.0);
    let phi = at_rest(&[0.0, 0.0, 10.0, 0.0, 0.0, 0.0]);
    let v = Vector::from_vec(vec![0.0, 0.0, 0.0, 0.0, 0.0, -2.0]);
    let r_check = predict_position(&[0.0, 0.0, 10.0], &[0.0; 3], &[0.0, 0.0, -2.0], 1.0);
    let repulsion = 1.0 / ((r_check[0] - 1000.0).powi(2) + r_check[1].powi(2) + r_check[2].powi(2));
    match g.evaluate(&phi, &v) {
        GoodnessValue::Finite(value) => assert!((value + repulsion).abs() <= 1e-9),
        other => panic!("{other:?}"),
    }

    // Look-ahead point inside the obstacle sphere.
    let g = landing(15000.0, SurfaceModel::Plane { height: 0.0 }, [0.0, 0.0, 9.0], 2.0);
    assert_eq!(g.evaluate(&phi, &v), GoodnessValue::NegInfinity);

    // No touchdown; the straight pass comes within 5 m of the target.
    let surface = SurfaceModel::Sphere {
        center: [0.0, 0.0, -1000.0],
        radius: 10.0,
    };
    let g = landing(0.0, surface, far, 1.0);
    let phi = at_rest(&[-100.0, 5.0, 0.0, 1.0, 0.0, 0.0]);
    let v = Vector::from_vec(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    match g.evaluate(&phi, &v) {
        GoodnessValue::Finite(value) => assert!((value + 25.0).abs() <= 1e-9),
        other => panic!("{other:?}"),
    }
}

#[test]
fn trajectory_distance_examples() {
    let line = |offset: f64, t_end: usize| {
        Trajectory::from_samples(
            (0..=t_end)
                .map(|k| State::new(k as f64 * 0.5, Vector::from_vec(vec![k as f64 + offset, 0.0])).unwrap())
                .collect(),
        )
        .unwrap()
    };
    assert_eq!(trajectory_distance(&line(0.0, 2), &line(0.0, 2)).unwrap(), 0.0);
    assert_eq!(trajectory_distance(&line(0.0, 2), &line(0.75, 2)).unwrap(), 0.75);
    assert_eq!(trajectory_distance(&line(0.0, 2), &line(0.0, 4)).unwrap(), 1.0);
}

fn random_trajectory(rng: &mut ChaCha8Rng, len: usize) -> Trajectory {
    Trajectory::from_samples(
        (0..len)
            .map(|k| {
                let x = Vector::from_iterator(3, (0..3).map(|_| rng.gen_range(-10.0..10.0)));
                State::new(k as f64 * 0.1, x).unwrap()
            })
            .collect(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn trajectory_distance_is_a_pseudometric(seed in any::<u64>(), len in 1usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_trajectory(&mut rng, len);
        let b = random_trajectory(&mut rng, len);
        let c = random_trajectory(&mut rng, len);
        let d = |p: &Trajectory, q: &Trajectory| trajectory_distance(p, q).unwrap();
        prop_assert_eq!(d(&a, &a), 0.0);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
    }
}
