//! Scenario files: a flat `key = value` format grouped in `[sections]`.
//!
//! Lines starting with `#` are comments, as is anything after a `#` on a
//! value line. Lists are comma separated. Unknown sections and keys are
//! rejected, as are duplicate keys. See `docs/scenario-format.md` for the full
//! key reference.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::{DMatrix, Matrix3};

use crate::error::{Error, Result};
use crate::goodness::{
    GoodnessFn, LandingGoodness, LandingGoodnessConfig, ObstacleGoodness, ObstacleGoodnessConfig, SafetyCheck,
    TrackingGoodness,
};
use crate::optimizer::{make_perturbation_set, PerturbationSet};
use crate::plants::{AsteroidPlant, DoubleIntegrator, Dynamics, IntegratorConfig, LinearPlant, Plant, PotentialField};
use crate::safety::{SurfaceModel, UnsafeSet};
use crate::types::{enumerate_grid, ControlGrid, LearnerConfig, NoiseKind, NoiseModel, RegularityConstants, Vector};

const KEYS: &[(&str, &[&str])] = &[
    ("scenario", &["name", "plant", "x0", "seed", "t_final", "target_radius", "mode"]),
    ("plant", &["omega", "mu", "inertia", "perturbation", "a", "b"]),
    ("learner", &["epsilon", "delta"]),
    ("integrator", &["steps_per_interval"]),
    ("grid", &["lower", "upper", "count"]),
    (
        "goodness",
        &[
            "kind",
            "target",
            "obstacle_ref",
            "tau",
            "predict_dt",
            "t_max",
            "collision_check_dt",
            "dt_scan",
            "horizon",
        ],
    ),
    ("unsafe", &["kind", "center", "radius"]),
    ("surface", &["kind", "height", "center", "radius", "semi_axes"]),
    ("noise", &["kind", "axis", "magnitude", "offset", "half_widths", "bound", "bound_ratio"]),
    ("robust", &["axes", "samples"]),
    ("safety", &["mode", "m0", "m1", "lipschitz", "steps"]),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Nominal,
    Robust,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nominal" => Ok(Mode::Nominal),
            "robust" => Ok(Mode::Robust),
            other => Err(Error::InvalidArgument(format!("unknown mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Nominal => "nominal",
            Mode::Robust => "robust",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GoodnessSpec {
    Obstacle {
        target: Vec<f64>,
        obstacle_ref: Vec<f64>,
        tau: f64,
        /// Defaults to one learning cycle.
        predict_dt: Option<f64>,
    },
    Landing {
        target: [f64; 3],
        tau: f64,
        t_max: f64,
        /// Defaults to two learning cycles.
        collision_check_dt: Option<f64>,
        /// Defaults to a quarter probe interval.
        dt_scan: Option<f64>,
    },
    Tracking {
        target: Vec<f64>,
        horizon: f64,
    },
}

impl GoodnessSpec {
    pub fn target(&self) -> Vec<f64> {
        match self {
            GoodnessSpec::Obstacle { target, .. } | GoodnessSpec::Tracking { target, .. } => target.clone(),
            GoodnessSpec::Landing { target, .. } => target.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NoiseSpec {
    None,
    Constant { offset: Vec<f64> },
    Uniform { half_widths: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseConfig {
    pub spec: NoiseSpec,
    /// Axis carrying the error when given as `axis` + `magnitude`; sweeps over
    /// `e` rewrite the offset on this axis.
    pub axis: Option<usize>,
    pub bound: Option<f64>,
    /// Declared bound as a multiple of the actual error size.
    pub bound_ratio: Option<f64>,
}

impl NoiseConfig {
    fn size(&self) -> f64 {
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        match &self.spec {
            NoiseSpec::None => 0.0,
            NoiseSpec::Constant { offset } => norm(offset),
            NoiseSpec::Uniform { half_widths } => norm(half_widths),
        }
    }

    /// The declared error bound `Delta`.
    pub fn resolved_bound(&self) -> f64 {
        match (self.bound_ratio, self.bound) {
            (Some(r), _) => r * self.size(),
            (None, Some(b)) => b,
            (None, None) => self.size(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SafetySpec {
    Forward,
    Path { steps: usize },
    Reach { consts: RegularityConstants, steps: usize },
}

/// Full experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub plant: Plant,
    pub x0: Vec<f64>,
    pub seed: u64,
    pub t_final: f64,
    pub target_radius: Option<f64>,
    pub mode: Mode,
    pub epsilon: f64,
    pub delta_probe: f64,
    pub steps_per_interval: usize,
    pub grid_lower: Vec<f64>,
    pub grid_upper: Vec<f64>,
    pub grid_count: Vec<usize>,
    pub goodness: GoodnessSpec,
    pub unsafe_set: Option<UnsafeSet>,
    pub surface: Option<SurfaceModel>,
    pub noise: NoiseConfig,
    pub robust_axes: Vec<usize>,
    pub robust_samples: usize,
    pub safety: SafetySpec,
}

/// Runtime objects derived from a validated [`Scenario`].
pub struct Built {
    pub plant: Plant,
    pub learner: LearnerConfig,
    pub grid: ControlGrid,
    pub goodness: Box<dyn GoodnessFn>,
    pub noise: NoiseModel,
    pub perturbations: PerturbationSet,
    pub unsafe_set: Option<UnsafeSet>,
    pub surface: Option<SurfaceModel>,
    pub target: Vec<f64>,
    pub integrator: IntegratorConfig,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let raw = RawScenario::parse(text)?;
        let scenario = raw.into_scenario()?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn state_dim(&self) -> usize {
        self.plant.state_dim()
    }

    pub fn control_dim(&self) -> usize {
        self.plant.control_dim()
    }

    pub fn learner(&self) -> Result<LearnerConfig> {
        LearnerConfig::new(self.control_dim(), self.epsilon, self.delta_probe)
    }

    pub fn validate(&self) -> Result<()> {
        self.build().map(|_| ())
    }

    /// Validates the scenario and assembles plant, grid, goodness and sensor.
    pub fn build(&self) -> Result<Built> {
        let n = self.state_dim();
        let m = self.control_dim();
        if self.x0.len() != n {
            return Err(Error::validation("scenario.x0", format!("expected {n} components, got {}", self.x0.len())));
        }
        if self.x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("scenario.x0", "components must be finite"));
        }
        if !(self.t_final > 0.0) {
            return Err(Error::validation("scenario.t_final", "must be > 0"));
        }
        if let Some(r) = self.target_radius {
            if !(r > 0.0) {
                return Err(Error::validation("scenario.target_radius", "must be > 0"));
            }
        }
        let learner = LearnerConfig::new(m, self.epsilon, self.delta_probe)
            .map_err(|e| Error::validation("learner", e.to_string()))?;
        if self.steps_per_interval == 0 {
            return Err(Error::validation("integrator.steps_per_interval", "must be >= 1"));
        }
        let integrator = IntegratorConfig::new(self.epsilon / self.steps_per_interval as f64)
            .map_err(|e| Error::validation("integrator.steps_per_interval", e.to_string()))?;

        for (field, len) in [
            ("grid.lower", self.grid_lower.len()),
            ("grid.upper", self.grid_upper.len()),
            ("grid.count", self.grid_count.len()),
        ] {
            if len != m {
                return Err(Error::validation(field, format!("expected {m} entries, got {len}")));
            }
        }
        let grid = enumerate_grid(&self.grid_lower, &self.grid_upper, &self.grid_count)
            .map_err(|e| Error::validation("grid", e.to_string()))?;

        let noise = self.noise_model()?;
        let delta = noise.bound();

        let safety = match &self.safety {
            SafetySpec::Forward => SafetyCheck::Forward,
            SafetySpec::Path { steps } => {
                if *steps == 0 {
                    return Err(Error::validation("safety.steps", "must be >= 1"));
                }
                SafetyCheck::Path { steps: *steps }
            }
            SafetySpec::Reach { consts, steps } => SafetyCheck::ReachTube {
                consts: *consts,
                m,
                u_max: grid.max_abs(),
                delta,
                steps: *steps,
            },
        };

        let goodness: Box<dyn GoodnessFn> = match &self.goodness {
            GoodnessSpec::Obstacle {
                target,
                obstacle_ref,
                tau,
                predict_dt,
            } => {
                let set = self
                    .unsafe_set
                    .clone()
                    .ok_or_else(|| Error::validation("unsafe", "obstacle goodness needs an unsafe set"))?;
                if 2 * target.len() != n {
                    return Err(Error::validation(
                        "goodness.target",
                        format!("state of dimension {n} needs a {}-D target", n / 2),
                    ));
                }
                let cfg = ObstacleGoodnessConfig {
                    target: target.clone(),
                    obstacle_ref: obstacle_ref.clone(),
                    tau: *tau,
                    predict_dt: predict_dt.unwrap_or(learner.cycle_length()),
                };
                Box::new(
                    ObstacleGoodness::new(cfg, set)
                        .map_err(|e| Error::validation("goodness", e.to_string()))?
                        .with_safety(safety),
                )
            }
            GoodnessSpec::Landing {
                target,
                tau,
                t_max,
                collision_check_dt,
                dt_scan,
            } => {
                if n != 6 {
                    return Err(Error::validation("goodness.kind", "landing goodness needs a 6-D state"));
                }
                let (center, radius) = match &self.unsafe_set {
                    Some(UnsafeSet::Sphere { center, radius }) => (*center, *radius),
                    _ => return Err(Error::validation("unsafe", "landing goodness needs a sphere obstacle")),
                };
                let surface = self
                    .surface
                    .clone()
                    .ok_or_else(|| Error::validation("surface", "landing goodness needs a surface"))?;
                let cfg = LandingGoodnessConfig {
                    target: *target,
                    obstacle_center: center,
                    obstacle_radius: radius,
                    tau: *tau,
                    t_max: *t_max,
                    collision_check_dt: collision_check_dt.unwrap_or(2.0 * learner.cycle_length()),
                    dt_scan: dt_scan.unwrap_or(self.epsilon / 4.0),
                };
                Box::new(
                    LandingGoodness::new(cfg, surface)
                        .map_err(|e| Error::validation("goodness", e.to_string()))?
                        .with_safety(safety),
                )
            }
            GoodnessSpec::Tracking { target, horizon } => {
                if target.len() != n {
                    return Err(Error::validation("goodness.target", format!("expected {n} components")));
                }
                if !(*horizon > 0.0) {
                    return Err(Error::validation("goodness.horizon", "must be > 0"));
                }
                Box::new(TrackingGoodness {
                    target: Vector::from_column_slice(target),
                    horizon: *horizon,
                })
            }
        };

        if let Some(a) = self.robust_axes.iter().find(|&&a| a >= n) {
            return Err(Error::validation("robust.axes", format!("axis {a} out of range")));
        }
        let perturbations = match self.mode {
            Mode::Nominal => PerturbationSet::zero(n),
            Mode::Robust => make_perturbation_set(delta, &self.robust_axes, self.robust_samples, n)
                .map_err(|e| Error::validation("robust.samples", e.to_string()))?,
        };

        if let Some(s) = &self.surface {
            s.validate().map_err(|e| Error::validation("surface", e.to_string()))?;
        }
        if let Some(u) = &self.unsafe_set {
            if u.position_dim() > n {
                return Err(Error::validation("unsafe.kind", "set dimension exceeds state dimension"));
            }
        }

        Ok(Built {
            plant: self.plant.clone(),
            learner,
            grid,
            goodness,
            noise,
            perturbations,
            unsafe_set: self.unsafe_set.clone(),
            surface: self.surface.clone(),
            target: self.goodness.target(),
            integrator,
        })
    }

    fn noise_model(&self) -> Result<NoiseModel> {
        let n = self.state_dim();
        let vec_of = |v: &[f64], field: &str| -> Result<Vector> {
            if v.len() != n {
                return Err(Error::validation(field, format!("expected {n} components, got {}", v.len())));
            }
            Ok(Vector::from_column_slice(v))
        };
        let kind = match &self.noise.spec {
            NoiseSpec::None => NoiseKind::None,
            NoiseSpec::Constant { offset } => NoiseKind::ConstantOffset(vec_of(offset, "noise.offset")?),
            NoiseSpec::Uniform { half_widths } => NoiseKind::BoundedUniform(vec_of(half_widths, "noise.half_widths")?),
        };
        if let Some(r) = self.noise.bound_ratio {
            if !(r >= 1.0) {
                return Err(Error::validation("noise.bound_ratio", "must be >= 1"));
            }
        }
        NoiseModel::new(kind, self.noise.resolved_bound()).map_err(|e| Error::validation("noise.bound", e.to_string()))
    }
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Scenario::parse(&text)
}

struct Entry {
    value: String,
    line: usize,
}

struct RawScenario {
    entries: BTreeMap<String, Entry>,
}

impl RawScenario {
    fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut section: Option<&'static str> = None;
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| parse_err(line, "unterminated section header"))?
                    .trim();
                let known = KEYS
                    .iter()
                    .find(|(s, _)| *s == name)
                    .ok_or_else(|| parse_err(line, format!("unknown section `{name}`")))?;
                section = Some(known.0);
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| parse_err(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            let sec = section.ok_or_else(|| parse_err(line, "key outside of any section"))?;
            let allowed = KEYS.iter().find(|(s, _)| *s == sec).map(|(_, k)| *k).unwrap_or(&[]);
            if !allowed.contains(&key) {
                return Err(parse_err(line, format!("unknown key `{key}` in section [{sec}]")));
            }
            if value.is_empty() {
                return Err(parse_err(line, format!("empty value for `{key}`")));
            }
            let full = format!("{sec}.{key}");
            if entries.contains_key(&full) {
                return Err(parse_err(line, format!("duplicate key `{full}`")));
            }
            entries.insert(
                full,
                Entry {
                    value: value.to_string(),
                    line,
                },
            );
        }
        Ok(Self { entries })
    }

    fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn str(&self, key: &str) -> Result<&str> {
        self.entries
            .get(key)
            .map(|e| e.value.as_str())
            .ok_or_else(|| Error::validation(key, "missing"))
    }

    fn opt_str(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    fn list(&self, key: &str) -> Result<Vec<f64>> {
        let e = self.entries.get(key).ok_or_else(|| Error::validation(key, "missing"))?;
        e.value
            .split(',')
            .map(|s| {
                let s = s.trim();
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(e.line, format!("`{key}`: `{s}` is not a finite number")))
            })
            .collect()
    }

    fn opt_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        if self.has(key) {
            self.list(key).map(Some)
        } else {
            Ok(None)
        }
    }

    fn f64(&self, key: &str) -> Result<f64> {
        let v = self.list(key)?;
        if v.len() != 1 {
            return Err(parse_err(self.entries[key].line, format!("`{key}` expects a single number")));
        }
        Ok(v[0])
    }

    fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        if self.has(key) {
            self.f64(key).map(Some)
        } else {
            Ok(None)
        }
    }

    fn usize_list(&self, key: &str) -> Result<Vec<usize>> {
        let e = self.entries.get(key).ok_or_else(|| Error::validation(key, "missing"))?;
        e.value
            .split(',')
            .map(|s| {
                let s = s.trim();
                s.parse::<usize>()
                    .map_err(|_| parse_err(e.line, format!("`{key}`: `{s}` is not a non-negative integer")))
            })
            .collect()
    }

    fn opt_usize(&self, key: &str) -> Result<Option<usize>> {
        if !self.has(key) {
            return Ok(None);
        }
        let v = self.usize_list(key)?;
        if v.len() != 1 {
            return Err(parse_err(self.entries[key].line, format!("`{key}` expects a single integer")));
        }
        Ok(Some(v[0]))
    }

    fn array3(&self, key: &str) -> Result<[f64; 3]> {
        let v = self.list(key)?;
        <[f64; 3]>::try_from(v.as_slice()).map_err(|_| parse_err(self.entries[key].line, format!("`{key}` expects 3 numbers")))
    }

    fn array2(&self, key: &str) -> Result<[f64; 2]> {
        let v = self.list(key)?;
        <[f64; 2]>::try_from(v.as_slice()).map_err(|_| parse_err(self.entries[key].line, format!("`{key}` expects 2 numbers")))
    }

    fn into_scenario(self) -> Result<Scenario> {
        let x0 = self.list("scenario.x0")?;
        let plant = match self.str("scenario.plant")? {
            "double_integrator" => Plant::DoubleIntegrator(DoubleIntegrator),
            "asteroid" => {
                let mu = self.f64("plant.mu")?;
                let potential = match self.opt_list("plant.inertia")? {
                    None => PotentialField::PointMass { mu },
                    Some(c) if c.len() == 9 => PotentialField::TriaxialQuadratic {
                        mu,
                        inertia: Matrix3::from_row_slice(&c),
                    },
                    Some(_) => return Err(Error::validation("plant.inertia", "expects 9 numbers (row-major 3x3)")),
                };
                let mut p = AsteroidPlant::new(self.opt_f64("plant.omega")?.unwrap_or(0.0), potential)
                    .map_err(|e| Error::validation("plant.omega", e.to_string()))?;
                if let Some(pert) = self.opt_list("plant.perturbation")? {
                    let arr = <[f64; 3]>::try_from(pert.as_slice())
                        .map_err(|_| Error::validation("plant.perturbation", "expects 3 numbers"))?;
                    p.perturbation = arr.into();
                }
                Plant::Asteroid(p)
            }
            "linear" => {
                let n = x0.len();
                let a = self.list("plant.a")?;
                let b = self.list("plant.b")?;
                if a.len() != n * n || b.is_empty() || b.len() % n != 0 {
                    return Err(Error::validation(
                        "plant.a",
                        format!("expected {} entries for A and a multiple of {n} for B", n * n),
                    ));
                }
                let m = b.len() / n;
                let plant = LinearPlant::new(DMatrix::from_row_slice(n, n, &a), DMatrix::from_row_slice(n, m, &b))
                    .map_err(|e| Error::validation("plant", e.to_string()))?;
                Plant::Linear(plant)
            }
            other => return Err(Error::validation("scenario.plant", format!("unknown plant `{other}`"))),
        };
        let n = plant.state_dim();

        let goodness = match self.str("goodness.kind")? {
            "obstacle" => GoodnessSpec::Obstacle {
                target: self.list("goodness.target")?,
                obstacle_ref: self.list("goodness.obstacle_ref")?,
                tau: self.f64("goodness.tau")?,
                predict_dt: self.opt_f64("goodness.predict_dt")?,
            },
            "landing" => GoodnessSpec::Landing {
                target: self.array3("goodness.target")?,
                tau: self.f64("goodness.tau")?,
                t_max: self.f64("goodness.t_max")?,
                collision_check_dt: self.opt_f64("goodness.collision_check_dt")?,
                dt_scan: self.opt_f64("goodness.dt_scan")?,
            },
            "tracking" => GoodnessSpec::Tracking {
                target: self.list("goodness.target")?,
                horizon: self.f64("goodness.horizon")?,
            },
            other => return Err(Error::validation("goodness.kind", format!("unknown goodness `{other}`"))),
        };

        let unsafe_set = match self.opt_str("unsafe.kind") {
            None => None,
            Some("semidisk") => Some(
                UnsafeSet::semi_disk(self.array2("unsafe.center")?, self.f64("unsafe.radius")?)
                    .map_err(|e| Error::validation("unsafe.radius", e.to_string()))?,
            ),
            Some("sphere") => Some(
                UnsafeSet::sphere(self.array3("unsafe.center")?, self.f64("unsafe.radius")?)
                    .map_err(|e| Error::validation("unsafe.radius", e.to_string()))?,
            ),
            Some(other) => return Err(Error::validation("unsafe.kind", format!("unknown set `{other}`"))),
        };

        let surface = match self.opt_str("surface.kind") {
            None => None,
            Some("plane") => Some(SurfaceModel::Plane {
                height: self.f64("surface.height")?,
            }),
            Some("sphere") => Some(SurfaceModel::Sphere {
                center: self.array3("surface.center")?,
                radius: self.f64("surface.radius")?,
            }),
            Some("ellipsoid") => Some(SurfaceModel::Ellipsoid {
                center: self.array3("surface.center")?,
                semi_axes: self.array3("surface.semi_axes")?,
            }),
            Some(other) => return Err(Error::validation("surface.kind", format!("unknown surface `{other}`"))),
        };

        let axis = self.opt_usize("noise.axis")?;
        let spec = match self.opt_str("noise.kind").unwrap_or("none") {
            "none" => NoiseSpec::None,
            "constant" => {
                let offset = match (self.opt_list("noise.offset")?, axis) {
                    (Some(o), _) => o,
                    (None, Some(a)) => {
                        if a >= n {
                            return Err(Error::validation("noise.axis", format!("axis {a} out of range")));
                        }
                        let mut o = vec![0.0; n];
                        o[a] = self.f64("noise.magnitude")?;
                        o
                    }
                    (None, None) => return Err(Error::validation("noise.offset", "give `offset` or `axis` + `magnitude`")),
                };
                NoiseSpec::Constant { offset }
            }
            "uniform" => NoiseSpec::Uniform {
                half_widths: self.list("noise.half_widths")?,
            },
            other => return Err(Error::validation("noise.kind", format!("unknown noise `{other}`"))),
        };
        let noise = NoiseConfig {
            spec,
            axis,
            bound: self.opt_f64("noise.bound")?,
            bound_ratio: self.opt_f64("noise.bound_ratio")?,
        };

        let safety = match self.opt_str("safety.mode").unwrap_or("forward") {
            "forward" => SafetySpec::Forward,
            "path" => SafetySpec::Path {
                steps: self.opt_usize("safety.steps")?.unwrap_or(8),
            },
            "reach" => SafetySpec::Reach {
                consts: RegularityConstants::new(
                    self.f64("safety.m0")?,
                    self.f64("safety.m1")?,
                    self.opt_f64("safety.lipschitz")?.unwrap_or(1.0),
                )
                .map_err(|e| Error::validation("safety", e.to_string()))?,
                steps: self.opt_usize("safety.steps")?.unwrap_or(8),
            },
            other => return Err(Error::validation("safety.mode", format!("unknown mode `{other}`"))),
        };

        let seed = match self.opt_str("scenario.seed") {
            None => 0,
            Some(s) => s
                .parse::<u64>()
                .map_err(|_| parse_err(self.entries["scenario.seed"].line, format!("bad seed `{s}`")))?,
        };

        Ok(Scenario {
            name: self.opt_str("scenario.name").unwrap_or("unnamed").to_string(),
            plant,
            x0,
            seed,
            t_final: self.f64("scenario.t_final")?,
            target_radius: self.opt_f64("scenario.target_radius")?,
            mode: self.opt_str("scenario.mode").unwrap_or("nominal").parse()?,
            epsilon: self.f64("learner.epsilon")?,
            delta_probe: self.f64("learner.delta")?,
            steps_per_interval: self.opt_usize("integrator.steps_per_interval")?.unwrap_or(20),
            grid_lower: self.list("grid.lower")?,
            grid_upper: self.list("grid.upper")?,
            grid_count: self.usize_list("grid.count")?,
            goodness,
            unsafe_set,
            surface,
            noise,
            robust_axes: if self.has("robust.axes") {
                self.usize_list("robust.axes")?
            } else {
                (0..n).collect()
            },
            robust_samples: self.opt_usize("robust.samples")?.unwrap_or(3),
            safety,
        })
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
