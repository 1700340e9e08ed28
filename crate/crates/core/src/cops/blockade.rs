//! Level-set blockades on `n^d` grids.
//!
//! Blocking cops hold every vertex whose coordinates sum to the current
//! level, which cuts the grid in two. Reserve cops walk to the part of the
//! next level that the shift cannot reach (the slice where the shift axis is
//! at its maximum); then every blocker not already at 0 on the shift axis
//! steps down and the level drops by one. A robber on the high side is
//! handled by reflecting every coordinate.

use num_traits::ToPrimitive;

use crate::engine::GameState;
use crate::error::{ConfigError, StrategyError};
use crate::graph::GraphSpec;
use crate::lattice::level_closed_form;
use crate::strategy::{note, Annotations, CopStrategy, InvariantReport};

use super::heuristics::greedy_moves;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockadeCounts {
    /// Starting level of the blockade.
    pub level: usize,
    pub blocking: usize,
    pub reserves: usize,
}

impl BlockadeCounts {
    pub fn total(&self) -> usize {
        self.blocking + self.reserves
    }
}

/// Cop counts for the three-dimensional blockade (`n` odd).
pub fn blockade_3d_counts(n: usize) -> BlockadeCounts {
    BlockadeCounts {
        level: 3 * (n - 1) / 2,
        blocking: (3 * n * n + 1) / 4,
        reserves: n.div_ceil(2),
    }
}

fn closed(a: usize, b: i64, n: usize) -> usize {
    level_closed_form(a, b, n).to_usize().unwrap_or(0)
}

/// Cop counts for the `d`-dimensional blockade. When `d(n-1)` is odd the two
/// sides of the starting level differ, and enough reserves for either side
/// are required.
pub fn blockade_ddim_counts(d: usize, n: usize) -> BlockadeCounts {
    let top = d * (n - 1);
    let m = top / 2;
    let blocking = closed(d, m as i64, n);
    let low = closed(d - 1, m as i64 - n as i64, n);
    let high = closed(d - 1, (top - m) as i64 - n as i64, n);
    BlockadeCounts {
        level: m,
        blocking,
        reserves: low.max(high),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockadeKind {
    ThreeD,
    AnyDim,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Blocking,
    Reserve,
}

pub struct Blockade {
    kind: BlockadeKind,
    best_effort: bool,
    checks: bool,
    report: InvariantReport,
    n: usize,
    d: usize,
    axis: usize,
    counts: BlockadeCounts,
    understaffed: bool,
    // Per-match memory.
    started: bool,
    mirrored: bool,
    level: usize,
    roles: Vec<Role>,
    targets: Option<Vec<Option<usize>>>,
    pursuit: bool,
}

impl Blockade {
    /// Shifts along the third coordinate of an `n x n x n` grid.
    pub fn three_d() -> Self {
        Self::new(BlockadeKind::ThreeD)
    }

    /// Shifts along the first coordinate of an `n^d` grid.
    pub fn any_dim() -> Self {
        Self::new(BlockadeKind::AnyDim)
    }

    fn new(kind: BlockadeKind) -> Self {
        Blockade {
            kind,
            best_effort: false,
            checks: true,
            report: InvariantReport::default(),
            n: 0,
            d: 0,
            axis: 0,
            counts: BlockadeCounts {
                level: 0,
                blocking: 0,
                reserves: 0,
            },
            understaffed: false,
            started: false,
            mirrored: false,
            level: 0,
            roles: Vec::new(),
            targets: None,
            pursuit: false,
        }
    }

    /// Accept fewer cops than the construction needs (and even `n` for the
    /// three-dimensional variant). Cops then hold a prefix of the level set.
    pub fn best_effort(mut self, on: bool) -> Self {
        self.best_effort = on;
        self
    }

    pub fn counts(&self) -> BlockadeCounts {
        self.counts
    }

    fn frame(&self, g: &GraphSpec, id: usize) -> usize {
        if self.mirrored {
            g.vertex_count() - 1 - id
        } else {
            id
        }
    }

    fn frame_sum(&self, g: &GraphSpec, id: usize) -> usize {
        let f = self.frame(g, id);
        (0..self.d).map(|a| g.coord(f, a)).sum()
    }

    /// Real ids of the frame vertices at `level` (all of them, or only the
    /// slice where the shift axis is maximal).
    fn level_ids(&self, g: &GraphSpec, level: usize, top_slice_only: bool) -> Vec<usize> {
        let mut out: Vec<usize> = (0..g.vertex_count())
            .filter(|&f| {
                let sum: usize = (0..self.d).map(|a| g.coord(f, a)).sum();
                sum == level && (!top_slice_only || g.coord(f, self.axis) == self.n - 1)
            })
            .map(|f| self.frame(g, f))
            .collect();
        out.sort_unstable();
        out
    }

    fn classify(&mut self, g: &GraphSpec, cops: &[usize]) {
        let mut taken = std::collections::HashSet::new();
        self.roles = cops
            .iter()
            .map(|&c| {
                if self.frame_sum(g, c) == self.level && taken.insert(c) {
                    Role::Blocking
                } else {
                    Role::Reserve
                }
            })
            .collect();
    }

    /// Nearest-first matching of reserve cops to the next level's top slice.
    fn assign(&self, g: &GraphSpec, cops: &[usize]) -> Vec<Option<usize>> {
        let mut out = vec![None; cops.len()];
        if self.level == 0 {
            return out;
        }
        let slots = self.level_ids(g, self.level - 1, true);
        let mut pairs = Vec::new();
        for (i, &c) in cops.iter().enumerate() {
            if self.roles[i] == Role::Reserve {
                for &t in &slots {
                    pairs.push((g.distance_ids(c, t), i, t));
                }
            }
        }
        pairs.sort_unstable();
        let mut used = std::collections::HashSet::new();
        for (_, i, t) in pairs {
            if out[i].is_none() && !used.contains(&t) {
                out[i] = Some(t);
                used.insert(t);
            }
        }
        out
    }
}

impl CopStrategy for Blockade {
    fn name(&self) -> String {
        match self.kind {
            BlockadeKind::ThreeD => "blockade-3d".into(),
            BlockadeKind::AnyDim => "blockade-ddim".into(),
        }
    }

    fn prepare(&mut self, g: &GraphSpec, k: usize) -> Result<(), ConfigError> {
        let name = self.name();
        let n = g.is_cubic_grid().filter(|&n| n >= 2).ok_or_else(|| {
            ConfigError::new(format!("{name} needs an n^d grid with n >= 2, got {g}"))
        })?;
        let d = g.dimension();
        self.counts = match self.kind {
            BlockadeKind::ThreeD => {
                if d != 3 {
                    return Err(ConfigError::new(format!(
                        "{name} needs a three-dimensional grid, got {g}"
                    )));
                }
                if n % 2 == 0 {
                    if !self.best_effort {
                        return Err(ConfigError::new(format!("{name} needs odd n, got n={n}")));
                    }
                    blockade_ddim_counts(3, n)
                } else {
                    blockade_3d_counts(n)
                }
            }
            BlockadeKind::AnyDim => {
                if d < 2 {
                    return Err(ConfigError::new(format!(
                        "{name} needs at least two dimensions"
                    )));
                }
                blockade_ddim_counts(d, n)
            }
        };
        self.understaffed = k < self.counts.total();
        if self.understaffed && !self.best_effort {
            return Err(ConfigError::new(format!(
                "{name} on {g} needs {} cops ({} blocking, {} reserve), got {k}",
                self.counts.total(),
                self.counts.blocking,
                self.counts.reserves
            )));
        }
        self.n = n;
        self.d = d;
        self.axis = match self.kind {
            BlockadeKind::ThreeD => 2,
            BlockadeKind::AnyDim => 0,
        };
        self.started = false;
        self.mirrored = false;
        self.pursuit = false;
        self.targets = None;
        self.report = InvariantReport::default();
        Ok(())
    }

    fn place(
        &mut self,
        g: &GraphSpec,
        k: usize,
        notes: &mut Annotations,
    ) -> Result<Vec<usize>, StrategyError> {
        self.mirrored = false;
        let blockers = self.level_ids(g, self.counts.level, false);
        let spare = if self.counts.level > 0 {
            self.level_ids(g, self.counts.level - 1, true)
        } else {
            Vec::new()
        };
        let mut out: Vec<usize> = blockers.iter().copied().take(k).collect();
        let mut i = 0;
        while out.len() < k {
            out.push(if spare.is_empty() {
                blockers[0]
            } else {
                spare[i % spare.len()]
            });
            i += 1;
        }
        note(notes, "level", self.counts.level);
        if self.understaffed {
            note(notes, "understaffed", blockers.len().saturating_sub(k));
        }
        Ok(out)
    }

    fn step(
        &mut self,
        s: &GameState,
        notes: &mut Annotations,
    ) -> Result<Vec<usize>, StrategyError> {
        let g = &s.graph;
        let robber = s.robber.expect("robber placed");
        if !self.started {
            self.started = true;
            let sum = (0..self.d).map(|a| g.coord(robber, a)).sum::<usize>();
            self.mirrored = sum > self.counts.level;
            self.level = if self.mirrored {
                self.d * (self.n - 1) - self.counts.level
            } else {
                self.counts.level
            };
            self.classify(g, &s.cops);
            note(notes, "side", if self.mirrored { "high" } else { "low" });
        }
        if self.pursuit || self.level == 0 {
            self.pursuit = true;
            note(notes, "mode", "pursuit");
            return Ok(greedy_moves(g, &s.cops, robber));
        }
        if self.checks && !self.understaffed {
            self.report.bump("check.robber-side");
            if self.frame_sum(g, robber) >= self.level {
                self.report.bump("violation.robber-crossed-blockade");
            }
        }

        if self.targets.is_none() {
            self.targets = Some(self.assign(g, &s.cops));
        }
        let targets = self.targets.clone().unwrap_or_default();
        let needed = self.level_ids(g, self.level - 1, true).len();
        let assigned = targets.iter().flatten().count();

        let mut dests = s.cops.clone();
        let mut ready = self.understaffed || assigned == needed;
        for (i, t) in targets.iter().enumerate() {
            if let Some(t) = *t {
                dests[i] = g.step_toward(s.cops[i], t);
                if dests[i] != t {
                    ready = false;
                }
            }
        }
        note(notes, "level", self.level);
        if !ready {
            note(notes, "phase", "gather");
            return Ok(dests);
        }

        let stride = g.stride(self.axis);
        for (i, &c) in s.cops.iter().enumerate() {
            if self.roles[i] == Role::Blocking {
                let f = self.frame(g, c);
                if g.coord(f, self.axis) >= 1 {
                    dests[i] = self.frame(g, f - stride);
                }
            }
        }
        self.level -= 1;
        self.targets = None;
        self.classify(g, &dests);
        note(notes, "phase", "shift");

        if self.checks && !self.understaffed {
            self.report.bump("check.level-set");
            let mut held: Vec<usize> = dests
                .iter()
                .zip(&self.roles)
                .filter(|(_, r)| **r == Role::Blocking)
                .map(|(&c, _)| c)
                .collect();
            held.sort_unstable();
            if held != self.level_ids(g, self.level, false) {
                self.report.bump("violation.level-set-incomplete");
            }
        }
        Ok(dests)
    }

    fn set_checks(&mut self, on: bool) {
        self.checks = on;
    }

    fn report(&self) -> InvariantReport {
        self.report.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::count_level;

    #[test]
    fn three_d_counts_small() {
        let c = blockade_3d_counts(3);
        assert_eq!((c.blocking, c.reserves, c.level), (7, 2, 3));
        assert_eq!(count_level(&[3, 3, 3], 3).to_usize(), Some(7));
    }

    #[test]
    fn ddim_examples() {
        let c = blockade_ddim_counts(2, 5);
        assert_eq!((c.level, c.blocking, c.reserves), (4, 5, 0));
        assert_eq!(blockade_ddim_counts(4, 3).blocking, 19);
    }

    #[test]
    fn ddim_matches_three_d_blocking_and_first_phase_slots() {
        for n in [3, 5, 7] {
            let three = blockade_3d_counts(n);
            let any = blockade_ddim_counts(3, n);
            assert_eq!(three.level, any.level);
            assert_eq!(three.blocking, any.blocking);
            // The first phase fills (n-1)/2 slots; the 3D count carries one spare reserve.
            assert_eq!(any.reserves, (n - 1) / 2);
            assert_eq!(three.reserves, any.reserves + 1);
        }
    }

    #[test]
    fn closed_forms_agree_with_enumeration_on_blockade_levels() {
        for d in 2..=4 {
            for n in 2..=7 {
                let c = blockade_ddim_counts(d, n);
                let dims = vec![n; d];
                assert_eq!(
                    Some(c.blocking),
                    count_level(&dims, c.level as i64).to_usize(),
                    "d={d} n={n}"
                );
            }
        }
    }
}
