//! Row-based invariants shared by the 2D grid and torus evaders.
//!
//! Rows run along coordinate 0, so row `y` is every vertex with coordinate 1
//! equal to `y`. A row is sparse when it holds at most `max_cops` cops: zero
//! for the grid evader, one for the torus evader.

use crate::engine::reachable_ids;
use crate::graph::{blocked_mask, GraphSpec};

/// Per-row flags: does row `y` hold at most `max_cops` cops?
pub fn sparse_rows(g: &GraphSpec, cops: &[usize], max_cops: usize) -> Vec<bool> {
    let mut count = vec![0usize; g.len(1)];
    for &c in cops {
        count[g.coord(c, 1)] += 1;
    }
    count.into_iter().map(|c| c <= max_cops).collect()
}

/// Whether any vertex of `reach` lies on a sparse row.
pub fn touches_sparse_row(g: &GraphSpec, reach: &[usize], cops: &[usize], max_cops: usize) -> bool {
    let rows = sparse_rows(g, cops, max_cops);
    reach.iter().any(|&v| rows[g.coord(v, 1)])
}

/// No cop on `v` or any of its neighbors.
pub fn clear_of_cops(g: &GraphSpec, cops: &[usize], v: usize) -> bool {
    let mask = blocked_mask(g, cops.iter().copied());
    let mut clear = !mask[v];
    g.for_each_neighbor(v, |w| clear &= !mask[w]);
    clear
}

/// The three per-turn properties of a waypoint `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowProperties {
    /// If the robber reaches a sparse row before moving, he reaches `v`.
    pub reachable: bool,
    /// No cop on or next to `v`.
    pub clear: bool,
    /// After the cops answer, a sparse row is reachable from `v`.
    pub next_turn: bool,
}

impl RowProperties {
    pub fn all(&self) -> bool {
        self.reachable && self.clear && self.next_turn
    }
}

/// Checks the properties for a waypoint chosen by a robber at `robber`
/// against cops `before`, with the cops at `after` once they have answered.
pub fn check_row_properties(
    g: &GraphSpec,
    before: &[usize],
    robber: usize,
    v: usize,
    after: &[usize],
    max_cops: usize,
) -> RowProperties {
    let reachable = match reachable_ids(g, before, robber) {
        Ok(reach) => {
            !touches_sparse_row(g, &reach, before, max_cops) || reach.binary_search(&v).is_ok()
        }
        Err(_) => false,
    };
    let clear = clear_of_cops(g, before, v);
    let next_turn = match reachable_ids(g, after, v) {
        Ok(reach) => touches_sparse_row(g, &reach, after, max_cops),
        Err(_) => false,
    };
    RowProperties {
        reachable,
        clear,
        next_turn,
    }
}
