//! Unsafe-set and surface geometry, and the Lipschitz reach tube used when
//! the dynamics may drift within a learning cycle.

use crate::error::{Error, Result};
use crate::types::{RegularityConstants, State, Vector};

/// Hazardous region in position space. Sets act on the leading position
/// components of a state.
#[derive(Clone, Debug, PartialEq)]
pub enum UnsafeSet {
    /// Planar half disk `|p - c| <= r` restricted to `p_y >= c_y`.
    SemiDisk { center: [f64; 2], radius: f64 },
    /// Ball `|p - c| <= r` in R^3.
    Sphere { center: [f64; 3], radius: f64 },
}

impl UnsafeSet {
    pub fn semi_disk(center: [f64; 2], radius: f64) -> Result<Self> {
        check_radius(radius)?;
        Ok(UnsafeSet::SemiDisk { center, radius })
    }

    pub fn sphere(center: [f64; 3], radius: f64) -> Result<Self> {
        check_radius(radius)?;
        Ok(UnsafeSet::Sphere { center, radius })
    }

    /// Number of leading state components the set constrains.
    pub fn position_dim(&self) -> usize {
        match self {
            UnsafeSet::SemiDisk { .. } => 2,
            UnsafeSet::Sphere { .. } => 3,
        }
    }

    /// Membership of a position (extra trailing components are ignored).
    pub fn contains_position(&self, p: &[f64]) -> bool {
        match *self {
            UnsafeSet::SemiDisk { center, radius } => {
                let dx = p[0] - center[0];
                let dy = p[1] - center[1];
                dx * dx + dy * dy <= radius * radius && p[1] >= center[1]
            }
            UnsafeSet::Sphere { center, radius } => {
                let d2: f64 = (0..3).map(|i| (p[i] - center[i]).powi(2)).sum();
                d2 <= radius * radius
            }
        }
    }

    /// Euclidean distance from a position to the set (zero inside).
    pub fn distance(&self, p: &[f64]) -> f64 {
        match *self {
            UnsafeSet::SemiDisk { center, radius } => {
                let dx = p[0] - center[0];
                let dy = p[1] - center[1];
                if dy >= 0.0 {
                    ((dx * dx + dy * dy).sqrt() - radius).max(0.0)
                } else {
                    // Below the flat side the nearest point lies on the diameter.
                    let cx = dx.clamp(-radius, radius);
                    ((dx - cx).powi(2) + dy * dy).sqrt()
                }
            }
            UnsafeSet::Sphere { center, radius } => {
                let d2: f64 = (0..3).map(|i| (p[i] - center[i]).powi(2)).sum();
                (d2.sqrt() - radius).max(0.0)
            }
        }
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if radius > 0.0 && radius.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("radius {radius} must be > 0")))
    }
}

pub fn contains(set: &UnsafeSet, x: &State) -> Result<bool> {
    let d = set.position_dim();
    if x.dim() < d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: x.dim(),
        });
    }
    Ok(set.contains_position(&x.x.as_slice()[..d]))
}

/// Body surface used for touchdown detection. Signed distance is negative
/// inside (below) the surface.
#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceModel {
    /// Horizontal plane `z = height`.
    Plane { height: f64 },
    Sphere { center: [f64; 3], radius: f64 },
    /// Axis-aligned ellipsoid. The sign of the returned distance is exact,
    /// its magnitude is the first-order estimate `(|q| - 1) * min(semi_axes)`
    /// with `q` the point in normalized coordinates.
    Ellipsoid { center: [f64; 3], semi_axes: [f64; 3] },
}

impl SurfaceModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            SurfaceModel::Plane { height } if height.is_finite() => Ok(()),
            SurfaceModel::Plane { .. } => Err(Error::InvalidArgument("plane height must be finite".into())),
            SurfaceModel::Sphere { radius, .. } => check_radius(*radius),
            SurfaceModel::Ellipsoid { semi_axes, .. } => semi_axes.iter().try_for_each(|a| check_radius(*a)),
        }
    }

    pub fn signed_distance(&self, r: &[f64]) -> f64 {
        match *self {
            SurfaceModel::Plane { height } => r[2] - height,
            SurfaceModel::Sphere { center, radius } => {
                let d2: f64 = (0..3).map(|i| (r[i] - center[i]).powi(2)).sum();
                d2.sqrt() - radius
            }
            SurfaceModel::Ellipsoid { center, semi_axes } => {
                let q2: f64 = (0..3).map(|i| ((r[i] - center[i]) / semi_axes[i]).powi(2)).sum();
                let a_min = semi_axes.iter().copied().fold(f64::INFINITY, f64::min);
                (q2.sqrt() - 1.0) * a_min
            }
        }
    }
}

/// Conservative ball tube around a constant-velocity extrapolation.
#[derive(Clone, Debug, PartialEq)]
pub struct ReachTube {
    centers: Vec<Vector>,
    radii: Vec<f64>,
}

impl ReachTube {
    pub fn centers(&self) -> &[Vector] {
        &self.centers
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }
}

/// Growth rate used by [`reach_overapprox`] for `m` inputs bounded by `u_max`.
pub fn tube_radius(consts: &RegularityConstants, m: usize, u_max: f64, delta: f64, s: f64) -> f64 {
    let gain = 1.0 + m as f64 * u_max;
    let growth = (consts.m1 * gain * s).exp();
    delta * growth + consts.m0 * gain * s * growth
}

/// Tube sampled at `steps + 1` instants `0, dt/steps, ..., dt`. Each radius
/// combines the observation uncertainty `delta` with Gronwall growth of the
/// dynamics mismatch over the elapsed time.
#[allow(clippy::too_many_arguments)]
pub fn reach_overapprox(
    x_obs: &State,
    v_est: &Vector,
    consts: &RegularityConstants,
    m: usize,
    u_max: f64,
    delta: f64,
    dt: f64,
    steps: usize,
) -> Result<ReachTube> {
    if !(dt > 0.0) || steps == 0 {
        return Err(Error::InvalidArgument("tube needs dt > 0 and at least one step".into()));
    }
    if v_est.len() != x_obs.dim() {
        return Err(Error::DimensionMismatch {
            expected: x_obs.dim(),
            found: v_est.len(),
        });
    }
    let mut centers = Vec::with_capacity(steps + 1);
    let mut radii = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let s = dt * k as f64 / steps as f64;
        centers.push(&x_obs.x + v_est * s);
        radii.push(tube_radius(consts, m, u_max, delta, s));
    }
    Ok(ReachTube { centers, radii })
}

pub fn tube_intersects(tube: &ReachTube, set: &UnsafeSet) -> bool {
    let d = set.position_dim();
    tube.centers
        .iter()
        .zip(&tube.radii)
        .any(|(c, rho)| set.distance(&c.as_slice()[..d]) <= *rho)
}
