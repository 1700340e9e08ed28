//! Exact solver: who wins with `k` cops, by retrograde analysis.
//!
//! A cop position is a sorted multiset of vertices, ranked densely by
//! [`MultisetIndex`]. Two kinds of states are tracked:
//!
//! * cops to move, `(C, r)`: the robber stands on `r` outside `C`;
//! * robber to move, `(C, K)`: `K` is a component of `G - C`. Every vertex of
//!   `K` is a legal destination, so the robber's options are shared by the
//!   whole component.
//!
//! `level[(C, r)]` is the number of cop turns until capture under optimal
//! play, or 0 if the robber survives forever. Level 1 means a cop is next to
//! the robber. Solved states are processed in FIFO order; a component node is
//! lost once all its vertices are solved, and that marks every position that
//! can move onto `C` as solved one level higher.

mod multiset;
mod policy;

pub use multiset::MultisetIndex;
pub use policy::{OptimalCop, OptimalRobber};

use std::collections::VecDeque;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::engine::{run_match, MatchConfig, Outcome};
use crate::error::SolveError;
use crate::graph::{blocked_mask, component_labels, GraphSpec, Vertex};

/// Default cap on the state-space estimate `C(V + k - 1, k) * V * 2`.
pub const DEFAULT_STATE_CAP: u128 = 100_000_000;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub cap: u128,
    /// Replay the witness against the extracted policies.
    pub verify: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            cap: DEFAULT_STATE_CAP,
            verify: true,
        }
    }
}

/// `C(v + k - 1, k) * v * 2`, saturating.
pub fn state_estimate(v: usize, k: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = match c.checked_mul(v as u128 + i) {
            Some(x) => x / (i + 1),
            None => return u128::MAX,
        };
    }
    c.saturating_mul(v as u128).saturating_mul(2)
}

const NO_COMPONENT: u16 = u16::MAX;

/// Solved game for one graph and cop count.
pub struct SolvedTable {
    graph: Arc<GraphSpec>,
    k: usize,
    index: MultisetIndex,
    closed: Vec<Vec<usize>>,
    /// Cops to move, indexed `config * V + r`.
    level: Vec<u16>,
    /// Component of `r` in `G - config`, or [`NO_COMPONENT`] on a cop.
    label: Vec<u16>,
    /// First robber node of each configuration.
    node_start: Vec<u32>,
    /// Level at which a robber node is lost, 0 if the robber survives there.
    node_level: Vec<u16>,
    states: u64,
    transitions: u64,
}

impl SolvedTable {
    pub fn build(g: &GraphSpec, k: usize, opts: &SolveOptions) -> Result<SolvedTable, SolveError> {
        let v = g.vertex_count();
        let estimate = state_estimate(v, k);
        if estimate > opts.cap {
            return Err(SolveError::TooLarge {
                estimate,
                cap: opts.cap,
            });
        }
        if v >= NO_COMPONENT as usize {
            return Err(SolveError::TooLarge {
                estimate: v as u128,
                cap: NO_COMPONENT as u128 - 1,
            });
        }
        let index = MultisetIndex::new(v, k);
        let configs = index.len();
        let closed: Vec<Vec<usize>> = (0..v)
            .map(|u| {
                let mut n = vec![u];
                n.extend(g.neighbor_ids(u));
                n
            })
            .collect();

        let mut label = vec![NO_COMPONENT; configs * v];
        let mut node_start = Vec::with_capacity(configs + 1);
        let mut remaining: Vec<u32> = Vec::new();
        for c in 0..configs {
            let cfg = index.unrank(c);
            let (labels, sizes) = component_labels(g, &blocked_mask(g, cfg.iter().copied()));
            node_start.push(remaining.len() as u32);
            for (r, &l) in labels.iter().enumerate() {
                if l != u32::MAX {
                    label[c * v + r] = l as u16;
                }
            }
            remaining.extend(sizes.iter().map(|&s| s as u32));
        }
        node_start.push(remaining.len() as u32);

        let mut table = SolvedTable {
            graph: Arc::new(g.clone()),
            k,
            index,
            closed,
            level: vec![0; configs * v],
            label,
            node_level: vec![0; remaining.len()],
            node_start,
            states: 0,
            transitions: 0,
        };
        table.states = (configs * v) as u64 + remaining.len() as u64;

        let mut queue = VecDeque::new();
        for c in 0..configs {
            let cfg = table.index.unrank(c);
            for r in 0..v {
                if table.label[c * v + r] != NO_COMPONENT
                    && cfg.iter().any(|&x| g.are_adjacent(x, r))
                {
                    table.level[c * v + r] = 1;
                    queue.push_back(c * v + r);
                }
            }
        }

        while let Some(s) = queue.pop_front() {
            let (c, r) = (s / v, s % v);
            let lvl = table.level[s];
            let comp = table.label[s];
            let node = table.node_start[c] as usize + comp as usize;
            remaining[node] -= 1;
            if remaining[node] != 0 {
                continue;
            }
            table.node_level[node] = lvl;
            if lvl == u16::MAX - 1 {
                return Err(SolveError::TooLarge {
                    estimate: lvl as u128,
                    cap: u16::MAX as u128 - 1,
                });
            }
            let members: Vec<usize> = (0..v).filter(|&x| table.label[c * v + x] == comp).collect();
            debug_assert!(members.contains(&r));
            for q in table.moves(c) {
                for &x in &members {
                    let t = q * v + x;
                    if table.label[t] != NO_COMPONENT && table.level[t] == 0 {
                        table.level[t] = lvl + 1;
                        queue.push_back(t);
                    }
                }
            }
        }
        Ok(table)
    }

    pub fn graph(&self) -> &GraphSpec {
        &self.graph
    }

    pub fn cop_count(&self) -> usize {
        self.k
    }

    pub fn states(&self) -> u64 {
        self.states
    }

    pub fn transitions(&self) -> u64 {
        self.transitions
    }

    /// Calls `f` with every ordered joint move of `cops`.
    pub(crate) fn for_each_joint_move(&self, cops: &[usize], mut f: impl FnMut(&[usize])) {
        let k = cops.len();
        let mut pick = vec![0usize; k];
        let mut dests: Vec<usize> = cops.iter().map(|&c| self.closed[c][0]).collect();
        loop {
            f(&dests);
            let mut i = k;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < self.closed[cops[i]].len() {
                    dests[i] = self.closed[cops[i]][pick[i]];
                    break;
                }
                pick[i] = 0;
                dests[i] = self.closed[cops[i]][0];
            }
        }
    }

    /// Ranks of the configurations reachable from configuration `c` in one
    /// cop turn. The move relation is symmetric, so these are also the
    /// configurations that can reach `c`.
    fn moves(&mut self, c: usize) -> Vec<usize> {
        let cfg = self.index.unrank(c);
        let mut out = Vec::new();
        let mut count = 0u64;
        let mut sorted = Vec::with_capacity(cfg.len());
        self.for_each_joint_move(&cfg, |d| {
            sorted.clear();
            sorted.extend_from_slice(d);
            sorted.sort_unstable();
            out.push(self.index.rank(&sorted));
            count += 1;
        });
        self.transitions += count;
        out.sort_unstable();
        out.dedup();
        out
    }

    pub(crate) fn rank(&self, cops: &[usize]) -> usize {
        let mut sorted = cops.to_vec();
        sorted.sort_unstable();
        self.index.rank(&sorted)
    }

    /// Cop turns to capture with cops at `cops` to move and the robber on
    /// `r`; 0 if the robber survives, `None` if `r` is under a cop.
    pub fn level(&self, cops: &[usize], r: usize) -> Option<u16> {
        let s = self.rank(cops) * self.graph.vertex_count() + r;
        (self.label[s] != NO_COMPONENT).then_some(self.level[s])
    }

    /// Level at which the robber loses after moving into `r`'s component
    /// with the cops at `cops`; 0 if he survives there.
    pub(crate) fn node_level(&self, cops_rank: usize, r: usize) -> Option<u16> {
        let l = self.label[cops_rank * self.graph.vertex_count() + r];
        (l != NO_COMPONENT)
            .then(|| self.node_level[self.node_start[cops_rank] as usize + l as usize])
    }

    /// The best cop placement: every robber placement is a cop win, with the
    /// smallest worst-case capture time, ties to the lowest rank. Returns the
    /// placement and that capture time.
    pub fn witness(&self) -> Option<(Vec<usize>, usize)> {
        let v = self.graph.vertex_count();
        let mut best: Option<(usize, usize)> = None;
        for c in 0..self.index.len() {
            let mut worst = 0usize;
            let mut won = true;
            for r in 0..v {
                let s = c * v + r;
                if self.label[s] == NO_COMPONENT {
                    continue;
                }
                if self.level[s] == 0 {
                    won = false;
                    break;
                }
                worst = worst.max(self.level[s] as usize);
            }
            if won && best.is_none_or(|(_, w)| worst < w) {
                best = Some((c, worst));
            }
        }
        best.map(|(c, w)| (self.index.unrank(c), w))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub graph: String,
    pub k: usize,
    pub cops_win: bool,
    /// Optimal placement when the cops win.
    pub witness: Option<Vec<Vertex>>,
    /// Cop turns to capture from the witness under optimal play.
    pub capture_rounds: Option<usize>,
    pub states: u64,
    pub transitions: u64,
    pub millis: u128,
}

/// Plays the witness with both extracted policies and checks that capture
/// happens exactly when the table says.
fn verify(table: &Arc<SolvedTable>, rounds: usize) -> Result<(), SolveError> {
    let g = table.graph().clone();
    let mut cop = OptimalCop::new(table.clone());
    let mut robber = OptimalRobber::new(table.clone());
    let cfg = MatchConfig::new(table.cop_count(), 0).max_rounds(rounds.max(1));
    let trace = run_match(&g, &mut cop, &mut robber, &cfg)
        .map_err(|e| SolveError::Verification(e.to_string()))?;
    match trace.outcome() {
        Some(Outcome::Capture { round }) if round == rounds => Ok(()),
        other => Err(SolveError::Verification(format!(
            "expected capture in round {rounds}, got {}",
            other.map_or("nothing".to_string(), |o| o.to_string())
        ))),
    }
}

/// Solves the game on `g` with `k` cops.
pub fn solve_game(g: &GraphSpec, k: usize, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    let mut result = SolveResult {
        graph: g.to_string(),
        k,
        cops_win: false,
        witness: None,
        capture_rounds: None,
        states: 0,
        transitions: 0,
        millis: 0,
    };
    if k == 0 {
        result.cops_win = g.vertex_count() == 0;
        return Ok(result);
    }
    let table = Arc::new(SolvedTable::build(g, k, opts)?);
    if let Some((placement, rounds)) = table.witness() {
        if opts.verify {
            verify(&table, rounds)?;
        }
        result.cops_win = true;
        result.witness = Some(placement.iter().map(|&c| g.vertex(c)).collect());
        result.capture_rounds = Some(rounds);
    }
    result.states = table.states();
    result.transitions = table.transitions();
    result.millis = start.elapsed().as_millis();
    Ok(result)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CopNumber {
    Exact(usize),
    /// The robber beats every cop count up to this one.
    Unknown(usize),
}

/// Smallest `k <= k_max` for which the cops win, with the solver run for
/// every `k` tried (ascending, so `k - 1` is a proven robber win).
pub fn cop_number_runs(
    g: &GraphSpec,
    k_max: usize,
    opts: &SolveOptions,
) -> Result<(CopNumber, Vec<SolveResult>), SolveError> {
    let mut runs = Vec::new();
    for k in 1..=k_max {
        let r = solve_game(g, k, opts).map_err(|e| SolveError::Partial {
            losing_through: k - 1,
            source: Box::new(e),
        })?;
        let won = r.cops_win;
        runs.push(r);
        if won {
            return Ok((CopNumber::Exact(k), runs));
        }
    }
    Ok((CopNumber::Unknown(k_max), runs))
}

pub fn cop_number(
    g: &GraphSpec,
    k_max: usize,
    opts: &SolveOptions,
) -> Result<CopNumber, SolveError> {
    cop_number_runs(g, k_max, opts).map(|(c, _)| c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(spec: &str, k: usize) -> SolveResult {
        solve_game(&spec.parse().unwrap(), k, &SolveOptions::default()).unwrap()
    }

    fn copnum(spec: &str) -> CopNumber {
        let g: GraphSpec = spec.parse().unwrap();
        cop_number(&g, g.vertex_count(), &SolveOptions::default()).unwrap()
    }

    #[test]
    fn single_vertex() {
        let r = solve("grid:1x1", 1);
        assert!(r.cops_win);
        assert_eq!(r.capture_rounds, Some(0));
    }

    #[test]
    fn four_cycle_needs_two() {
        assert!(!solve("cube:2", 1).cops_win);
        assert!(solve("cube:2", 2).cops_win);
    }

    #[test]
    fn three_by_three() {
        assert!(!solve("grid:3x3", 1).cops_win);
        assert!(solve("grid:3x3", 2).cops_win);
    }

    #[test]
    fn small_cop_numbers() {
        assert_eq!(copnum("grid:2x2"), CopNumber::Exact(2));
        assert_eq!(copnum("grid:5x1"), CopNumber::Exact(1));
        assert_eq!(copnum("grid:5"), CopNumber::Exact(1));
    }

    #[test]
    fn four_by_four() {
        let g: GraphSpec = "grid:4x4".parse().unwrap();
        let (c, runs) = cop_number_runs(&g, 16, &SolveOptions::default()).unwrap();
        assert!(
            matches!(c, CopNumber::Exact(3) | CopNumber::Exact(4)),
            "{c:?}"
        );
        assert!(runs.last().unwrap().witness.is_some());
    }

    #[test]
    fn no_cops_never_win() {
        assert!(!solve("grid:2x2", 0).cops_win);
    }

    #[test]
    fn cap_is_enforced() {
        let g: GraphSpec = "grid:6x6".parse().unwrap();
        let opts = SolveOptions {
            cap: 1000,
            verify: true,
        };
        assert!(matches!(
            solve_game(&g, 3, &opts),
            Err(SolveError::TooLarge { .. })
        ));
        match cop_number(&g, 3, &opts) {
            Err(SolveError::Partial { losing_through, .. }) => assert_eq!(losing_through, 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn estimate_matches_formula() {
        assert_eq!(state_estimate(16, 4), 3876 * 16 * 2);
        assert_eq!(state_estimate(9, 1), 9 * 9 * 2);
    }

    #[test]
    fn levels_are_consistent_with_one_step_lookahead() {
        // A cop-to-move state at level L > 1 has a move whose robber node is
        // lost at L - 1, and no move reaching a node lost earlier.
        let g: GraphSpec = "grid:3x3".parse().unwrap();
        let t = SolvedTable::build(&g, 2, &SolveOptions::default()).unwrap();
        let v = g.vertex_count();
        for c in 0..t.index.len() {
            let cfg = t.index.unrank(c);
            for r in 0..v {
                let Some(l) = t.level(&cfg, r) else { continue };
                if l <= 1 {
                    continue;
                }
                let mut best = u16::MAX;
                t.for_each_joint_move(&cfg, |d| {
                    if let Some(nl) = t.node_level(t.rank(d), r) {
                        if nl > 0 {
                            best = best.min(nl);
                        }
                    }
                });
                assert_eq!(best, l - 1, "cfg {cfg:?} r {r}");
            }
        }
    }
}
