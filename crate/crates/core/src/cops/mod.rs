//! Cop strategies: the guaranteed-capture constructions plus two simple
//! pursuers used as adversaries for the robber strategies.

mod blockade;
mod diagonal;
mod heuristics;
mod sweep;

pub use blockade::{blockade_3d_counts, blockade_ddim_counts, Blockade, BlockadeCounts};
pub use diagonal::DiagonalPairs;
pub use heuristics::{greedy_moves, GreedyCop, RandomCop};
pub use sweep::{RowSweep, TorusTwoRows};

use crate::error::ConfigError;
use crate::graph::GraphSpec;

/// Side length of an `n x n` grid, or a configuration error.
pub(crate) fn square_grid(g: &GraphSpec, who: &str) -> Result<usize, ConfigError> {
    match g.is_cubic_grid() {
        Some(n) if g.dimension() == 2 => Ok(n),
        _ => Err(ConfigError::new(format!(
            "{who} needs a square grid, got {g}"
        ))),
    }
}
