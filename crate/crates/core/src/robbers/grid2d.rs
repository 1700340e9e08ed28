//! Evading `n - 2` cops on an `n x n` grid by always standing where an empty
//! row stays within reach.
//!
//! Coordinates are `(x, y)`: `x` is the column, `y` the row counted from the
//! top. Each search runs in a frame (optional transpose, then vertical and
//! horizontal flips) so that the chosen rows are at the top and the chosen
//! half is on the right.

use crate::engine::{reachable_ids, GameState};
use crate::error::{ConfigError, StrategyError};
use crate::graph::{blocked_mask, GraphSpec, Vertex};
use crate::strategy::{Annotations, InvariantReport, RobberStrategy};

use super::heuristics::{refuge, refuge_placement};
use super::properties::{clear_of_cops, touches_sparse_row};
use super::Waypoint;

#[derive(Clone, Copy, Debug)]
struct Frame {
    n: usize,
    transpose: bool,
    flip_y: bool,
    flip_x: bool,
}

impl Frame {
    fn to_real(self, a: usize, b: usize) -> (usize, usize) {
        let a = if self.flip_x { self.n - 1 - a } else { a };
        let b = if self.flip_y { self.n - 1 - b } else { b };
        if self.transpose {
            (b, a)
        } else {
            (a, b)
        }
    }

    fn to_frame(self, x: usize, y: usize) -> (usize, usize) {
        let (a, b) = if self.transpose { (y, x) } else { (x, y) };
        let a = if self.flip_x { self.n - 1 - a } else { a };
        let b = if self.flip_y { self.n - 1 - b } else { b };
        (a, b)
    }

    fn cops(&self, g: &GraphSpec, cops: &[usize]) -> Vec<(usize, usize)> {
        cops.iter()
            .map(|&c| self.to_frame(g.coord(c, 0), g.coord(c, 1)))
            .collect()
    }

    fn id(&self, g: &GraphSpec, a: usize, b: usize) -> usize {
        let (x, y) = self.to_real(a, b);
        g.index(&Vertex::from([x, y]))
    }

    fn side(&self) -> &'static str {
        match (self.transpose, self.flip_y) {
            (false, false) => "top",
            (false, true) => "bottom",
            (true, false) => "left",
            (true, true) => "right",
        }
    }
}

struct Clear<'a> {
    g: &'a GraphSpec,
    mask: Vec<bool>,
}

impl Clear<'_> {
    fn at(&self, v: usize) -> bool {
        let mut ok = !self.mask[v];
        self.g.for_each_neighbor(v, |w| ok &= !self.mask[w]);
        ok
    }
}

/// Sector search once the top `k` rows of `frame` hold at most `k - 2` cops.
fn sector_waypoint(
    g: &GraphSpec,
    clear: &Clear,
    frame: Frame,
    cops: &[usize],
    k: usize,
) -> Option<Waypoint> {
    let n = frame.n;
    let half = n / 2;
    let c0 = n - half;
    let bound = (k - 2) / 2;
    let in_rows = frame.cops(g, cops);
    let right = in_rows.iter().filter(|&&(a, b)| b < k && a >= c0).count();
    let frame = Frame {
        flip_x: right > bound,
        ..frame
    };
    let fc = frame.cops(g, cops);
    let sector: Vec<(usize, usize)> = fc.into_iter().filter(|&(a, b)| b < k && a >= c0).collect();
    let base = Waypoint::new(0)
        .with("case", 1)
        .with("rows", frame.side())
        .with("k", k)
        .with("half", if frame.flip_x { "left" } else { "right" });

    if sector.iter().all(|&(_, b)| b >= 2) {
        let v = frame.id(g, c0 + 1, 0);
        return Some(Waypoint {
            v,
            ..base.with("subcase", "open-top")
        });
    }
    if k < 4 {
        return None;
    }
    let (d, r) = (k / 4, k % 4);
    let start = if r < 2 { 0 } else { 2 };
    let group = (0..d).map(|j| start + 4 * j).find(|&top| {
        sector
            .iter()
            .filter(|&&(_, b)| top <= b && b < top + 4)
            .count()
            <= 1
    })?;
    for b in [group + 1, group + 2] {
        for a in c0 + 1..n {
            let v = frame.id(g, a, b);
            if clear.at(v) {
                return Some(Waypoint {
                    v,
                    ..base.with("subcase", "quiet-rows").with("group", group)
                });
            }
        }
    }
    None
}

/// Waypoint for a robber facing `cops` on a square grid with `n >= 4`, or
/// `None` when neither case of the search produces one.
pub fn grid2d_waypoint(g: &GraphSpec, cops: &[usize]) -> Option<Waypoint> {
    let n = g.len(0);
    let clear = Clear {
        g,
        mask: blocked_mask(g, cops.iter().copied()),
    };
    for transpose in [false, true] {
        for k in 2..=n.saturating_sub(2) {
            for flip_y in [false, true] {
                let frame = Frame {
                    n,
                    transpose,
                    flip_y,
                    flip_x: false,
                };
                let count = frame.cops(g, cops).iter().filter(|&&(_, b)| b < k).count();
                if count + 2 <= k {
                    if let Some(w) = sector_waypoint(g, &clear, frame, cops, k) {
                        return Some(w);
                    }
                }
            }
        }
    }
    for (transpose, flip_y) in [(false, false), (false, true), (true, false), (true, true)] {
        let frame = Frame {
            n,
            transpose,
            flip_y,
            flip_x: false,
        };
        let fc = frame.cops(g, cops);
        let Some(row) = (0..2).find(|&b| fc.iter().all(|&(_, cb)| cb != b)) else {
            continue;
        };
        for a in 1..n - 1 {
            let v = frame.id(g, a, row);
            if clear.at(v) {
                return Some(
                    Waypoint::new(v)
                        .with("case", 2)
                        .with("rows", frame.side())
                        .with("row", row),
                );
            }
        }
    }
    None
}

pub struct Grid2dEvader {
    best_effort: bool,
    checks: bool,
    report: InvariantReport,
    small: bool,
    last: Option<usize>,
}

impl Default for Grid2dEvader {
    fn default() -> Self {
        Self::new()
    }
}

impl Grid2dEvader {
    pub fn new() -> Self {
        Grid2dEvader {
            best_effort: false,
            checks: true,
            report: InvariantReport::default(),
            small: false,
            last: None,
        }
    }

    /// Accept more than `n - 2` cops and fall back to [`super::MaxComponent`]
    /// when no waypoint exists.
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
        if self.small {
            notes.insert("case".into(), "small-grid".into());
            return Ok(None);
        }
        match grid2d_waypoint(g, cops) {
            Some(w) => Ok(Some(w)),
            None if self.best_effort => {
                self.report.bump("fallback.no-waypoint");
                notes.insert("fallback".into(), "no-waypoint".into());
                Ok(None)
            }
            None => Err(StrategyError::new(
                "no waypoint satisfies the case analysis",
            )),
        }
    }
}

impl RobberStrategy for Grid2dEvader {
    fn name(&self) -> String {
        "grid2d-evader".into()
    }

    fn prepare(&mut self, g: &GraphSpec, k: usize) -> Result<(), ConfigError> {
        let n = match g.is_cubic_grid() {
            Some(n) if g.dimension() == 2 => n,
            _ => {
                return Err(ConfigError::new(format!(
                    "grid2d-evader needs a square grid, got {g}"
                )))
            }
        };
        if k + 2 > n && !self.best_effort {
            return Err(ConfigError::new(format!(
                "grid2d-evader evades at most {} cops on {g}, got {k}",
                n.saturating_sub(2)
            )));
        }
        self.small = n <= 3;
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
            if !touches_sparse_row(g, &reach, &s.cops, 0) {
                self.report.bump("violation.empty-row-lost");
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
            if touches_sparse_row(g, &reach, &s.cops, 0) && !reachable {
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
