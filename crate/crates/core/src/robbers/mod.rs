//! Robber strategies: the evaders that carry their own per-turn invariants,
//! the retraction lift, and simple heuristics.

mod grid2d;
mod grid3d;
mod heuristics;
mod potential;
pub mod properties;
mod retract;
mod torus;

pub use grid2d::{grid2d_waypoint, Grid2dEvader};
pub use grid3d::{region_chain, Grid3dEvader, RegionChain, GRID3D_COP_FRACTION};
pub use heuristics::{refuge, MaxComponent, RandomRobber, Stationary};
pub use potential::{cube_cop_budget, potential, PotentialEvader};
pub use retract::{parse_clamp, RetractLift};
pub use torus::{torus_waypoint, TorusEvader};

use crate::strategy::Annotations;

/// A chosen robber destination and the notes explaining the choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Waypoint {
    pub v: usize,
    pub certificate: Annotations,
}

impl Waypoint {
    fn new(v: usize) -> Self {
        Waypoint {
            v,
            certificate: Annotations::new(),
        }
    }

    fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.certificate.insert(key.to_string(), value.to_string());
        self
    }
}
