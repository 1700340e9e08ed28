use crate::engine::GameState;
use crate::error::{ConfigError, StrategyError};
use crate::graph::{GraphSpec, Vertex};
use crate::strategy::{note, Annotations, CopStrategy, InvariantReport};

use super::square_grid;

/// `n` cops fill row 0 and walk down one row per turn.
///
/// Extra cops double up on row 0 and walk with the others.
#[derive(Default)]
pub struct RowSweep {
    n: usize,
    row: usize,
    checks: bool,
    report: InvariantReport,
}

impl RowSweep {
    pub fn new() -> Self {
        RowSweep {
            checks: true,
            ..Default::default()
        }
    }
}

impl CopStrategy for RowSweep {
    fn name(&self) -> String {
        "row-sweep".into()
    }

    fn prepare(&mut self, g: &GraphSpec, k: usize) -> Result<(), ConfigError> {
        self.n = square_grid(g, "row-sweep")?;
        if k < self.n {
            return Err(ConfigError::new(format!(
                "row-sweep needs {} cops, got {k}",
                self.n
            )));
        }
        self.row = 0;
        self.report = InvariantReport::default();
        Ok(())
    }

    fn place(
        &mut self,
        g: &GraphSpec,
        k: usize,
        _: &mut Annotations,
    ) -> Result<Vec<usize>, StrategyError> {
        Ok((0..k)
            .map(|i| g.index(&Vertex::from([i % self.n, 0])))
            .collect())
    }

    fn step(
        &mut self,
        s: &GameState,
        notes: &mut Annotations,
    ) -> Result<Vec<usize>, StrategyError> {
        let g = &s.graph;
        if self.checks {
            let robber_row = g.coord(s.robber.expect("robber placed"), 1);
            self.report.bump("check.sweep");
            if robber_row <= self.row {
                self.report.bump("violation.robber-not-below-sweep");
            }
        }
        if self.row + 1 < self.n {
            self.row += 1;
        }
        note(notes, "row", self.row);
        Ok(s.cops
            .iter()
            .map(|&c| g.with_coord(c, 1, self.row))
            .collect())
    }

    fn set_checks(&mut self, on: bool) {
        self.checks = on;
    }

    fn report(&self) -> InvariantReport {
        self.report.clone()
    }
}

/// `2n` cops fill rows 0 and `n-1` of an `n x n` torus; the two walls close
/// in on each other one row per turn.
#[derive(Default)]
pub struct TorusTwoRows {
    n: usize,
    turns: usize,
    checks: bool,
    report: InvariantReport,
}

impl TorusTwoRows {
    pub fn new() -> Self {
        TorusTwoRows {
            checks: true,
            ..Default::default()
        }
    }

    fn walls(&self) -> (usize, usize) {
        let top = self.turns.min((self.n - 1) / 2);
        let bottom = (self.n - 1 - self.turns).max(self.n / 2);
        (top, bottom)
    }
}

impl CopStrategy for TorusTwoRows {
    fn name(&self) -> String {
        "torus-two-rows".into()
    }

    fn prepare(&mut self, g: &GraphSpec, k: usize) -> Result<(), ConfigError> {
        if !(g.is_torus() && g.dimension() == 2 && g.len(0) == g.len(1)) {
            return Err(ConfigError::new(format!(
                "torus-two-rows needs a square torus, got {g}"
            )));
        }
        self.n = g.len(0);
        if k < 2 * self.n {
            return Err(ConfigError::new(format!(
                "torus-two-rows needs {} cops, got {k}",
                2 * self.n
            )));
        }
        self.turns = 0;
        self.report = InvariantReport::default();
        Ok(())
    }

    fn place(
        &mut self,
        g: &GraphSpec,
        k: usize,
        _: &mut Annotations,
    ) -> Result<Vec<usize>, StrategyError> {
        let n = self.n;
        Ok((0..k)
            .map(|i| {
                let row = if i >= n && i < 2 * n { n - 1 } else { 0 };
                g.index(&Vertex::from([i % n, row]))
            })
            .collect())
    }

    fn step(
        &mut self,
        s: &GameState,
        notes: &mut Annotations,
    ) -> Result<Vec<usize>, StrategyError> {
        let g = &s.graph;
        let n = self.n;
        if self.checks {
            let (top, bottom) = self.walls();
            let row = g.coord(s.robber.expect("robber placed"), 1);
            self.report.bump("check.band");
            if !(top < row && row < bottom) {
                self.report.bump("violation.robber-outside-band");
            }
            for wall in [top, bottom] {
                let full = (0..n).all(|x| s.cops.contains(&g.index(&Vertex::from([x, wall]))));
                if !full {
                    self.report.bump("violation.wall-incomplete");
                }
            }
        }
        self.turns += 1;
        let (top, bottom) = self.walls();
        note(notes, "walls", format!("{top},{bottom}"));
        Ok(s.cops
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let row = if i >= n && i < 2 * n { bottom } else { top };
                g.with_coord(c, 1, row)
            })
            .collect())
    }

    fn set_checks(&mut self, on: bool) {
        self.checks = on;
    }

    fn report(&self) -> InvariantReport {
        self.report.clone()
    }
}
