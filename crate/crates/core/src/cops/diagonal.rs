//! `n - 1` cops on an `n x n` grid, `n` odd: pairs on the diagonal split into
//! a staircase cut once the robber commits to a side, then the staircase
//! flattens against the grid edge.
//!
//! Coordinates are `(x, y)` with `x` the column and `y` the row from the top.

use crate::engine::{reachable_ids, GameState};
use crate::error::{ConfigError, StrategyError};
use crate::graph::{GraphSpec, Vertex};
use crate::strategy::{note, Annotations, CopStrategy, InvariantReport};

use super::square_grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Plan {
    /// Waiting for the robber's placement.
    Start,
    /// Staircase below the diagonal (`transposed` for above), `sweeps` steps done.
    Stair { transposed: bool, sweeps: usize },
    /// Robber boxed in on the diagonal; capture on the next turn.
    Surround,
}

pub struct DiagonalPairs {
    n: usize,
    plan: Plan,
    last_component: Option<usize>,
    checks: bool,
    report: InvariantReport,
}

impl Default for DiagonalPairs {
    fn default() -> Self {
        Self::new()
    }
}

impl DiagonalPairs {
    pub fn new() -> Self {
        DiagonalPairs {
            n: 0,
            plan: Plan::Start,
            last_component: None,
            checks: true,
            report: InvariantReport::default(),
        }
    }

    fn id(g: &GraphSpec, x: usize, y: usize, transposed: bool) -> usize {
        if transposed {
            g.index(&Vertex::from([y, x]))
        } else {
            g.index(&Vertex::from([x, y]))
        }
    }

    /// Staircase position of the cop guarding column `x` after `sweeps` steps.
    fn stair_row(&self, x: usize, sweeps: usize) -> usize {
        x + 1 + sweeps.min(self.n - 2 - x)
    }

    fn surround(&self, g: &GraphSpec, cops: &[usize], d: usize) -> Vec<usize> {
        let n = self.n;
        let mut dests = cops.to_vec();
        let at = |x: usize, y: usize| g.index(&Vertex::from([x, y]));
        // Pair j (cops 2j, 2j+1) sits on (2j+1, 2j+1).
        if d == 0 {
            dests[0] = at(0, 1);
            dests[1] = at(1, 0);
        } else if d == n - 1 {
            dests[n - 3] = at(n - 2, n - 1);
            dests[n - 2] = at(n - 1, n - 2);
        } else {
            let lower = d - 2; // index of the pair on (d-1, d-1)
            dests[lower] = at(d, d - 1);
            dests[lower + 1] = at(d - 1, d);
            dests[lower + 2] = at(d + 1, d);
            dests[lower + 3] = at(d, d + 1);
        }
        dests
    }
}

impl CopStrategy for DiagonalPairs {
    fn name(&self) -> String {
        "diagonal-pairs".into()
    }

    fn prepare(&mut self, g: &GraphSpec, k: usize) -> Result<(), ConfigError> {
        let n = square_grid(g, "diagonal-pairs")?;
        if n < 3 || n % 2 == 0 {
            return Err(ConfigError::new(format!(
                "diagonal-pairs needs odd n >= 3, got n={n}"
            )));
        }
        if k < n - 1 {
            return Err(ConfigError::new(format!(
                "diagonal-pairs needs {} cops, got {k}",
                n - 1
            )));
        }
        self.n = n;
        self.plan = Plan::Start;
        self.last_component = None;
        self.report = InvariantReport::default();
        Ok(())
    }

    fn place(
        &mut self,
        g: &GraphSpec,
        k: usize,
        _: &mut Annotations,
    ) -> Result<Vec<usize>, StrategyError> {
        // Extra cops wait on the first pair's vertex and never move.
        Ok((0..k)
            .map(|i| {
                let j = if i < self.n - 1 { i / 2 } else { 0 };
                g.index(&Vertex::from([2 * j + 1, 2 * j + 1]))
            })
            .collect())
    }

    fn step(
        &mut self,
        s: &GameState,
        notes: &mut Annotations,
    ) -> Result<Vec<usize>, StrategyError> {
        let g = &s.graph;
        let robber = s.robber.expect("robber placed");
        let (rx, ry) = (g.coord(robber, 0), g.coord(robber, 1));
        let mut dests = s.cops.clone();

        match self.plan {
            Plan::Start => {
                if rx == ry {
                    note(notes, "case", "diagonal");
                    self.plan = Plan::Surround;
                    dests = self.surround(g, &s.cops, rx);
                } else {
                    let transposed = rx > ry;
                    note(notes, "case", if transposed { "above" } else { "below" });
                    self.plan = Plan::Stair {
                        transposed,
                        sweeps: 0,
                    };
                    for x in 0..self.n - 1 {
                        dests[x] = Self::id(g, x, x + 1, transposed);
                    }
                }
            }
            Plan::Surround => {
                // Every free neighbor of the robber is covered; step onto him.
                let i = s
                    .cops
                    .iter()
                    .position(|&c| g.are_adjacent(c, robber))
                    .ok_or_else(|| {
                        StrategyError::new("no cop adjacent to the surrounded robber")
                    })?;
                dests[i] = robber;
            }
            Plan::Stair { transposed, sweeps } => {
                let sweeps = sweeps + 1;
                self.plan = Plan::Stair { transposed, sweeps };
                note(notes, "sweep", sweeps);
                for x in 0..self.n - 1 {
                    dests[x] = Self::id(g, x, self.stair_row(x, sweeps), transposed);
                }
            }
        }

        if self.checks {
            if let Plan::Stair { .. } = self.plan {
                if !dests.contains(&robber) {
                    let size = reachable_ids(g, &dests, robber)
                        .map(|r| r.len())
                        .unwrap_or(0);
                    self.report.bump("check.component");
                    if self.last_component.is_some_and(|prev| size >= prev) {
                        self.report.bump("violation.component-not-shrinking");
                    }
                    self.last_component = Some(size);
                }
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
