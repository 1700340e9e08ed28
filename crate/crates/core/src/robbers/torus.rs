//! Evading `2n - 25` cops on an `n x n` torus, `n >= 18`.
//!
//! The rows are split into six bands of `d` or `d + 1` consecutive rows
//! (`n = 6d + r`, the first `r` bands get the extra row). A band of height
//! `h` holding at most `2h - 5` cops has three rows with at most one cop and
//! three consecutive columns that are cop-free inside the band; the robber
//! stands at the middle column on the second such row.

use crate::engine::{reachable_ids, GameState};
use crate::error::{ConfigError, StrategyError};
use crate::graph::{GraphSpec, Vertex};
use crate::strategy::{Annotations, InvariantReport, RobberStrategy};

use super::heuristics::{refuge, refuge_placement};
use super::properties::{clear_of_cops, touches_sparse_row};
use super::Waypoint;

/// `(first row, height)` of each of the six bands.
pub(crate) fn bands(n: usize) -> Vec<(usize, usize)> {
    let (d, r) = (n / 6, n % 6);
    let mut out = Vec::with_capacity(6);
    let mut top = 0;
    for i in 0..6 {
        let h = if i < r { d + 1 } else { d };
        out.push((top, h));
        top += h;
    }
    out
}

/// Waypoint on an `n x n` torus, or `None` if no band qualifies.
pub fn torus_waypoint(g: &GraphSpec, cops: &[usize]) -> Option<Waypoint> {
    let n = g.len(0);
    let mut row_count = vec![0usize; n];
    for &c in cops {
        row_count[g.coord(c, 1)] += 1;
    }
    for (index, (top, h)) in bands(n).into_iter().enumerate() {
        let inside: Vec<usize> = cops
            .iter()
            .copied()
            .filter(|&c| (top..top + h).contains(&g.coord(c, 1)))
            .collect();
        if inside.len() + 5 > 2 * h {
            continue;
        }
        let quiet: Vec<usize> = (top..top + h).filter(|&y| row_count[y] <= 1).collect();
        if quiet.len() < 3 {
            continue;
        }
        let mut busy_col = vec![false; n];
        for &c in &inside {
            busy_col[g.coord(c, 0)] = true;
        }
        let Some(left) = (0..n).find(|&x| (0..3).all(|i| !busy_col[(x + i) % n])) else {
            continue;
        };
        let x = (left + 1) % n;
        let y = quiet[1];
        let v = g.index(&Vertex::from([x, y]));
        return Some(
            Waypoint::new(v)
                .with("band", index)
                .with("band_rows", format!("{top}..{}", top + h))
                .with("band_cops", inside.len())
                .with("columns", format!("{left},{x},{}", (left + 2) % n))
                .with("row", y),
        );
    }
    None
}

pub struct TorusEvader {
    best_effort: bool,
    checks: bool,
    report: InvariantReport,
    last: Option<usize>,
}

impl Default for TorusEvader {
    fn default() -> Self {
        Self::new()
    }
}

impl TorusEvader {
    pub fn new() -> Self {
        TorusEvader {
            best_effort: false,
            checks: true,
            report: InvariantReport::default(),
            last: None,
        }
    }

    /// Allow any square torus and cop count, falling back to
    /// [`super::MaxComponent`] when no band qualifies.
    pub fn best_effort(mut self, on: bool) -> Self {
        self.best_effort = on;
        self
    }

    fn choose(
        &mut self,
        g: &GraphSpec,
        cops: &[usize],
        notes: &mut Annotations,
    ) -> Result<Option<Waypoint>, StrategyError> {
        match torus_waypoint(g, cops) {
            Some(w) => Ok(Some(w)),
            None if self.best_effort => {
                self.report.bump("fallback.no-band");
                notes.insert("fallback".into(), "no-band".into());
                Ok(None)
            }
            None => Err(StrategyError::new("no band has few enough cops")),
        }
    }
}

impl RobberStrategy for TorusEvader {
    fn name(&self) -> String {
        "torus-evader".into()
    }

    fn prepare(&mut self, g: &GraphSpec, k: usize) -> Result<(), ConfigError> {
        if !(g.is_torus() && g.dimension() == 2 && g.len(0) == g.len(1)) {
            return Err(ConfigError::new(format!(
                "torus-evader needs a square torus, got {g}"
            )));
        }
        let n = g.len(0);
        if !self.best_effort {
            if n < 18 {
                return Err(ConfigError::new(format!(
                    "torus-evader needs n >= 18, got n={n}"
                )));
            }
            if k + 25 > 2 * n {
                return Err(ConfigError::new(format!(
                    "torus-evader evades at most {} cops on {g}, got {k}",
                    2 * n - 25
                )));
            }
        }
        self.last = None;
        self.report = InvariantReport::default();
        Ok(())
    }

    fn place(
        &mut self,
        g: &GraphSpec,
        cops: &[usize],
        notes: &mut Annotations,
    ) -> Result<Option<usize>, StrategyError> {
        match self.choose(g, cops, notes)? {
            Some(w) => {
                if self.checks {
                    self.report.bump("check.clear");
                    if !clear_of_cops(g, cops, w.v) {
                        self.report.bump("violation.waypoint-not-clear");
                    }
                }
                notes.extend(w.certificate);
                self.last = Some(w.v);
                Ok(Some(w.v))
            }
            None => {
                self.last = None;
                Ok(refuge_placement(g, cops))
            }
        }
    }

    fn step(&mut self, s: &GameState, notes: &mut Annotations) -> Result<usize, StrategyError> {
        let g = &s.graph;
        let robber = s
            .robber
            .ok_or_else(|| StrategyError::new("robber not placed"))?;
        let reach =
            reachable_ids(g, &s.cops, robber).map_err(|e| StrategyError::new(e.to_string()))?;
        if self.checks && self.last == Some(robber) {
            self.report.bump("check.next-turn");
            if !touches_sparse_row(g, &reach, &s.cops, 1) {
                self.report.bump("violation.nearly-empty-row-lost");
            }
        }
        let Some(w) = self.choose(g, &s.cops, notes)? else {
            self.last = None;
            return Ok(refuge(g, &s.cops, &reach).unwrap_or(robber));
        };
        let reachable = reach.binary_search(&w.v).is_ok();
        if self.checks {
            self.report.bump("check.clear");
            if !clear_of_cops(g, &s.cops, w.v) {
                self.report.bump("violation.waypoint-not-clear");
            }
            self.report.bump("check.reachable");
            if touches_sparse_row(g, &reach, &s.cops, 1) && !reachable {
                self.report.bump("violation.waypoint-unreachable");
            }
        }
        notes.extend(w.certificate);
        if reachable {
            self.last = Some(w.v);
            Ok(w.v)
        } else {
            self.report.bump("fallback.unreachable-waypoint");
            self.last = None;
            Ok(refuge(g, &s.cops, &reach).unwrap_or(robber))
        }
    }

    fn set_checks(&mut self, on: bool) {
        self.checks = on;
    }

    fn report(&self) -> InvariantReport {
        self.report.clone()
    }
}
