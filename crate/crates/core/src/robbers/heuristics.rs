use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{reachable_ids, GameState};
use crate::error::{ConfigError, StrategyError};
use crate::graph::{blocked_mask, component_labels, GraphSpec};
use crate::strategy::{note, Annotations, RobberStrategy};

/// Distance from every vertex to the nearest cop, ignoring blocking.
fn cop_distances(g: &GraphSpec, cops: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &c in cops {
        if dist[c] != 0 {
            dist[c] = 0;
            queue.push_back(c);
        }
    }
    while let Some(u) = queue.pop_front() {
        let d = dist[u] + 1;
        g.for_each_neighbor(u, |w| {
            if dist[w] == usize::MAX {
                dist[w] = d;
                queue.push_back(w);
            }
        });
    }
    dist
}

/// Best hiding spot among `candidates`: first a vertex with no cop next to
/// it, then the largest component once every cop's closed neighborhood is
/// removed, then the farthest from the cops, then the lowest id.
pub fn refuge(g: &GraphSpec, cops: &[usize], candidates: &[usize]) -> Option<usize> {
    let mut guarded = blocked_mask(g, cops.iter().copied());
    for &c in cops {
        g.for_each_neighbor(c, |w| guarded[w] = true);
    }
    let (labels, sizes) = component_labels(g, &guarded);
    let dist = cop_distances(g, cops);
    let score = |v: usize| {
        let safe = !guarded[v];
        let room = if safe { sizes[labels[v] as usize] } else { 0 };
        (safe, room, dist[v])
    };
    let mut best: Option<(usize, (bool, usize, usize))> = None;
    for &v in candidates {
        let s = score(v);
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((v, s));
        }
    }
    best.map(|(v, _)| v)
}

fn free_vertices(g: &GraphSpec, cops: &[usize]) -> Vec<usize> {
    let mask = blocked_mask(g, cops.iter().copied());
    (0..g.vertex_count()).filter(|&v| !mask[v]).collect()
}

pub(crate) fn refuge_placement(g: &GraphSpec, cops: &[usize]) -> Option<usize> {
    refuge(g, cops, &free_vertices(g, cops))
}

pub(crate) fn refuge_step(s: &GameState) -> Result<usize, StrategyError> {
    let robber = s
        .robber
        .ok_or_else(|| StrategyError::new("robber not placed"))?;
    let reach =
        reachable_ids(&s.graph, &s.cops, robber).map_err(|e| StrategyError::new(e.to_string()))?;
    Ok(refuge(&s.graph, &s.cops, &reach).unwrap_or(robber))
}

/// Heads for the roomiest cop-free region it can reach.
#[derive(Default)]
pub struct MaxComponent;

impl MaxComponent {
    pub fn new() -> Self {
        MaxComponent
    }
}

impl RobberStrategy for MaxComponent {
    fn name(&self) -> String {
        "max-component".into()
    }

    fn prepare(&mut self, _: &GraphSpec, _: usize) -> Result<(), ConfigError> {
        Ok(())
    }

    fn place(
        &mut self,
        g: &GraphSpec,
        cops: &[usize],
        _: &mut Annotations,
    ) -> Result<Option<usize>, StrategyError> {
        Ok(refuge_placement(g, cops))
    }

    fn step(&mut self, s: &GameState, _: &mut Annotations) -> Result<usize, StrategyError> {
        refuge_step(s)
    }
}

/// Places like [`MaxComponent`] and then never moves.
#[derive(Default)]
pub struct Stationary;

impl Stationary {
    pub fn new() -> Self {
        Stationary
    }
}

impl RobberStrategy for Stationary {
    fn name(&self) -> String {
        "stationary".into()
    }

    fn prepare(&mut self, _: &GraphSpec, _: usize) -> Result<(), ConfigError> {
        Ok(())
    }

    fn place(
        &mut self,
        g: &GraphSpec,
        cops: &[usize],
        _: &mut Annotations,
    ) -> Result<Option<usize>, StrategyError> {
        Ok(refuge_placement(g, cops))
    }

    fn step(&mut self, s: &GameState, _: &mut Annotations) -> Result<usize, StrategyError> {
        s.robber
            .ok_or_else(|| StrategyError::new("robber not placed"))
    }
}

/// Uniform over free vertices at placement and over the reachable set after.
pub struct RandomRobber {
    rng: ChaCha8Rng,
}

impl RandomRobber {
    pub fn new(seed: u64) -> Self {
        RandomRobber {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl RobberStrategy for RandomRobber {
    fn name(&self) -> String {
        "random".into()
    }

    fn prepare(&mut self, _: &GraphSpec, _: usize) -> Result<(), ConfigError> {
        Ok(())
    }

    fn place(
        &mut self,
        g: &GraphSpec,
        cops: &[usize],
        _: &mut Annotations,
    ) -> Result<Option<usize>, StrategyError> {
        let free = free_vertices(g, cops);
        if free.is_empty() {
            return Ok(None);
        }
        Ok(Some(free[self.rng.random_range(0..free.len())]))
    }

    fn step(&mut self, s: &GameState, notes: &mut Annotations) -> Result<usize, StrategyError> {
        let robber = s
            .robber
            .ok_or_else(|| StrategyError::new("robber not placed"))?;
        let reach = reachable_ids(&s.graph, &s.cops, robber)
            .map_err(|e| StrategyError::new(e.to_string()))?;
        note(notes, "choices", reach.len());
        Ok(reach[self.rng.random_range(0..reach.len())])
    }

    fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }
}
