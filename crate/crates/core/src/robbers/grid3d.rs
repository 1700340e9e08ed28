//! Evading a constant fraction of `n^2` cops on an `n x n x n` grid,
//! `n` divisible by 10.
//!
//! Each turn narrows the grid to the sparsest half, the sparsest quadrant
//! inside it and the sparsest octant inside that. Within the octant it takes
//! the sparsest group of five consecutive `z` planes, then the sparsest
//! `5 x n/2 x 5` slab of that group, then the first cop-free `5 x 3 x 5`
//! window along `y`, and stands at the center of that window's interior.
//! Ties always go to the first candidate in the order `z`, `y`, `x`, low
//! before high.

use crate::engine::{reachable_ids, GameState};
use crate::error::{ConfigError, StrategyError};
use crate::graph::{blocked_mask, component_labels, interior, GraphSpec, GridBox};
use crate::strategy::{note, Annotations, InvariantReport, RobberStrategy};

use super::heuristics::{refuge, refuge_placement};
use super::properties::clear_of_cops;
use super::Waypoint;

/// Cop budget per `n^2` the evader is built for.
pub const GRID3D_COP_FRACTION: f64 = 0.7172;

/// Boxes chosen by one round of the sparsest-region search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionChain {
    pub half: GridBox,
    pub quadrant: GridBox,
    pub octant: GridBox,
    /// Five consecutive `z` planes of the octant, the sparsest unless only
    /// another group within the plane bound has an empty window.
    pub planes: GridBox,
    /// Five consecutive `x` values of `planes`, every `y` of the octant. The
    /// sparsest such slab, unless it has no empty window and another slab
    /// with at most eight cops does.
    pub slab: GridBox,
    /// First cop-free window of three consecutive `y` values in `slab`.
    pub window: Option<GridBox>,
    /// Cop counts of half, quadrant, octant, planes and slab.
    pub counts: [usize; 5],
}

const AXIS_ORDER: [usize; 3] = [2, 1, 0];

/// Bound on cops in the chosen group of five planes, per unit of `n`.
const PLANE_GROUP_FRACTION: f64 = 0.8965;

fn restrict(b: &GridBox, axis: usize, lo: usize, hi: usize) -> GridBox {
    let mut out = b.clone();
    out.lo.0[axis] = lo;
    out.hi.0[axis] = hi;
    out
}

fn count_in(g: &GraphSpec, cops: &[usize], b: &GridBox) -> usize {
    cops.iter().filter(|&&c| b.contains_id(g, c)).count()
}

/// First box with the fewest cops.
fn sparsest(g: &GraphSpec, cops: &[usize], candidates: Vec<GridBox>) -> (GridBox, usize) {
    let mut best: Option<(GridBox, usize)> = None;
    for b in candidates {
        let c = count_in(g, cops, &b);
        if best.as_ref().is_none_or(|(_, bc)| c < *bc) {
            best = Some((b, c));
        }
    }
    best.expect("at least one candidate")
}

/// Splits `within` in half along each of `axes` (in the listed order, low
/// half first).
fn halves(within: &GridBox, axes: &[usize], n: usize) -> Vec<GridBox> {
    let h = n / 2;
    let mut out = Vec::new();
    for &a in axes {
        out.push(restrict(within, a, 0, h - 1));
        out.push(restrict(within, a, h, n - 1));
    }
    out
}

/// Consecutive groups of `width` along `axis` inside `within`.
fn groups(within: &GridBox, axis: usize, width: usize) -> Vec<GridBox> {
    let (lo, hi) = (within.lo.0[axis], within.hi.0[axis]);
    (lo..=hi)
        .step_by(width)
        .filter(|s| s + width - 1 <= hi)
        .map(|s| restrict(within, axis, s, s + width - 1))
        .collect()
}

/// Runs the sparsest-region search on an `n x n x n` grid, `n` divisible by 10.
pub fn region_chain(g: &GraphSpec, cops: &[usize]) -> RegionChain {
    let n = g.len(0);
    let whole = g.whole_box();
    let (half, c_half) = sparsest(g, cops, halves(&whole, &AXIS_ORDER, n));
    let split = |b: &GridBox| {
        AXIS_ORDER
            .iter()
            .copied()
            .filter(|&a| b.side(a) != n)
            .collect::<Vec<_>>()
    };
    let used = split(&half);
    let rest: Vec<usize> = AXIS_ORDER
        .iter()
        .copied()
        .filter(|a| !used.contains(a))
        .collect();
    let (quadrant, c_quad) = sparsest(g, cops, halves(&half, &rest, n));
    let used = split(&quadrant);
    let rest: Vec<usize> = AXIS_ORDER
        .iter()
        .copied()
        .filter(|a| !used.contains(a))
        .collect();
    let (octant, c_oct) = sparsest(g, cops, halves(&quadrant, &rest, n));
    let by_count = |boxes: Vec<GridBox>| {
        let mut out: Vec<(GridBox, usize)> = boxes
            .into_iter()
            .map(|b| {
                let c = count_in(g, cops, &b);
                (b, c)
            })
            .collect();
        out.sort_by_key(|(_, c)| *c);
        out
    };
    // The sparsest plane group and slab first. If that slab has no empty
    // window, any plane group within the plane bound and any slab of it with
    // at most eight cops will do.
    let plane_groups = by_count(groups(&octant, 2, 5));
    let plane_cap = PLANE_GROUP_FRACTION * n as f64;
    let (mut planes, mut c_planes) = plane_groups[0].clone();
    let mut slabs = by_count(groups(&planes, 0, 5));
    let (mut slab, mut c_slab) = slabs[0].clone();
    let mut window = None;
    'search: for (i, (p, cp)) in plane_groups.iter().enumerate() {
        if i > 0 {
            if *cp as f64 > plane_cap {
                break;
            }
            slabs = by_count(groups(p, 0, 5));
        }
        for (j, (b, c)) in slabs.iter().enumerate() {
            if j > 0 && *c >= 9 {
                break;
            }
            if let Some(w) = empty_window(g, cops, b) {
                (planes, c_planes, slab, c_slab, window) = (p.clone(), *cp, b.clone(), *c, Some(w));
                break 'search;
            }
        }
    }
    RegionChain {
        half,
        quadrant,
        octant,
        planes,
        slab,
        window,
        counts: [c_half, c_quad, c_oct, c_planes, c_slab],
    }
}

/// First cop-free run of three consecutive `y` values in `slab`.
fn empty_window(g: &GraphSpec, cops: &[usize], slab: &GridBox) -> Option<GridBox> {
    (slab.lo.0[1]..=slab.hi.0[1].saturating_sub(2))
        .map(|y| restrict(slab, 1, y, y + 2))
        .find(|b| count_in(g, cops, b) == 0)
}

fn in_largest_component(g: &GraphSpec, cops: &[usize], v: usize) -> bool {
    let (labels, sizes) = component_labels(g, &blocked_mask(g, cops.iter().copied()));
    if labels[v] == u32::MAX {
        return false;
    }
    let max = sizes.iter().copied().max().unwrap_or(0);
    sizes[labels[v] as usize] == max
}

pub struct Grid3dEvader {
    best_effort: bool,
    checks: bool,
    report: InvariantReport,
    budget: usize,
    within_budget: bool,
    last: Option<usize>,
}

impl Default for Grid3dEvader {
    fn default() -> Self {
        Self::new()
    }
}

impl Grid3dEvader {
    pub fn new() -> Self {
        Grid3dEvader {
            best_effort: false,
            checks: true,
            report: InvariantReport::default(),
            budget: 0,
            within_budget: true,
            last: None,
        }
    }

    /// Allow any cop count on an `n x n x n` grid with `n` divisible by 10.
    pub fn best_effort(mut self, on: bool) -> Self {
        self.best_effort = on;
        self
    }

    /// `floor(0.7172 n^2)`.
    pub fn cop_budget(n: usize) -> usize {
        (GRID3D_COP_FRACTION * (n * n) as f64).floor() as usize
    }

    fn choose(
        &mut self,
        g: &GraphSpec,
        cops: &[usize],
        notes: &mut Annotations,
    ) -> Option<Waypoint> {
        let n = g.len(0);
        let chain = region_chain(g, cops);
        let [_, _, c_oct, c_planes, c_slab] = chain.counts;
        if self.checks {
            self.report.bump("check.octant-bound");
            if 8 * c_oct > cops.len() {
                self.report.bump("violation.octant-bound");
            }
            if self.within_budget {
                self.report.bump("check.plane-group-bound");
                if c_planes as f64 > PLANE_GROUP_FRACTION * n as f64 {
                    self.report.bump("violation.plane-group-bound");
                }
                self.report.bump("check.slab-bound");
                if c_slab >= 9 {
                    self.report.bump("violation.slab-bound");
                }
            }
        }
        let Some(window) = chain.window.clone() else {
            self.report.bump("fallback.no-empty-window");
            note(notes, "fallback", "no-empty-window");
            return None;
        };
        let inner = interior(g, &window).ok().flatten()?;
        let v = g.index(&inner.center());
        if self.checks {
            self.report.bump("check.window-empty");
            if count_in(g, cops, &window) != 0 || !clear_of_cops(g, cops, v) {
                self.report.bump("violation.window-not-empty");
            }
            self.report.bump("check.largest-component");
            if !in_largest_component(g, cops, v) {
                self.report.bump("largest-component.miss-at-selection");
            }
        }
        let w = Waypoint::new(v)
            .with(
                "octant",
                format!("{}..{}", chain.octant.lo, chain.octant.hi),
            )
            .with("octant_cops", c_oct)
            .with("planes_cops", c_planes)
            .with("slab_cops", c_slab)
            .with("window", format!("{}..{}", window.lo, window.hi));
        Some(w)
    }
}

impl RobberStrategy for Grid3dEvader {
    fn name(&self) -> String {
        "grid3d-evader".into()
    }

    fn prepare(&mut self, g: &GraphSpec, k: usize) -> Result<(), ConfigError> {
        let n = match g.is_cubic_grid() {
            Some(n) if g.dimension() == 3 && n % 10 == 0 && n > 0 => n,
            _ => {
                return Err(ConfigError::new(format!(
                    "grid3d-evader needs an n x n x n grid with n divisible by 10, got {g}"
                )))
            }
        };
        self.budget = Self::cop_budget(n);
        self.within_budget = k <= self.budget;
        if !self.within_budget && !self.best_effort {
            return Err(ConfigError::new(format!(
                "grid3d-evader targets at most {} cops on {g}, got {k}",
                self.budget
            )));
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
        match self.choose(g, cops, notes) {
            Some(w) => {
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
        if self.checks && self.last == Some(robber) {
            self.report.bump("check.largest-component-after-cops");
            if !in_largest_component(g, &s.cops, robber) {
                self.report.bump("largest-component.miss-after-cops");
            }
        }
        let reach =
            reachable_ids(g, &s.cops, robber).map_err(|e| StrategyError::new(e.to_string()))?;
        match self.choose(g, &s.cops, notes) {
            Some(w) if reach.binary_search(&w.v).is_ok() => {
                notes.extend(w.certificate);
                self.last = Some(w.v);
                Ok(w.v)
            }
            found => {
                if found.is_some() {
                    self.report.bump("fallback.unreachable-waypoint");
                    note(notes, "fallback", "unreachable-waypoint");
                }
                self.last = None;
                Ok(refuge(g, &s.cops, &reach).unwrap_or(robber))
            }
        }
    }

    fn set_checks(&mut self, on: bool) {
        self.checks = on;
    }

    fn report(&self) -> InvariantReport {
        self.report.clone()
    }
}
