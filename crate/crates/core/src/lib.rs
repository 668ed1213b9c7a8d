//! Robust myopic control for control-affine systems with unknown dynamics.
//!
//! The controller repeatedly probes the plant with `m + 1` affinely
//! independent controls, learns the local velocity map from the observed
//! state differences and greedily picks the grid control with the best
//! goodness. Hard constraints are encoded as a `NegInfinity` goodness; the
//! robust variant maximizes the worst case over trajectories within the
//! observation error bound.

pub mod bounds;
pub mod error;
pub mod goodness;
pub mod harness;
pub mod learner;
pub mod optimizer;
pub mod plants;
pub mod safety;
pub mod types;

pub use error::{Error, Result};
pub use types::{
    enumerate_grid, goodness_max, ControlAction, ControlGrid, GoodnessValue, LearnerConfig, NoiseKind, NoiseModel,
    RegularityConstants, State, Trajectory, Vector,
};
