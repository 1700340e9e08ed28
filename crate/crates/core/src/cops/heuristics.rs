use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::GameState;
use crate::error::{ConfigError, StrategyError};
use crate::graph::GraphSpec;
use crate::strategy::{Annotations, CopStrategy};

/// Every cop takes one shortest-path step toward the robber.
pub fn greedy_moves(g: &GraphSpec, cops: &[usize], robber: usize) -> Vec<usize> {
    cops.iter().map(|&c| g.step_toward(c, robber)).collect()
}

/// Cops spread evenly by id, then chase the robber along shortest paths.
#[derive(Default)]
pub struct GreedyCop;

impl GreedyCop {
    pub fn new() -> Self {
        GreedyCop
    }
}

impl CopStrategy for GreedyCop {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn prepare(&mut self, _: &GraphSpec, _: usize) -> Result<(), ConfigError> {
        Ok(())
    }

    fn place(
        &mut self,
        g: &GraphSpec,
        k: usize,
        _: &mut Annotations,
    ) -> Result<Vec<usize>, StrategyError> {
        let v = g.vertex_count();
        Ok((0..k).map(|i| i * v / k).collect())
    }

    fn step(&mut self, s: &GameState, _: &mut Annotations) -> Result<Vec<usize>, StrategyError> {
        Ok(greedy_moves(
            &s.graph,
            &s.cops,
            s.robber.expect("robber placed"),
        ))
    }
}

/// Uniformly random placement and uniformly random closed-neighborhood moves.
pub struct RandomCop {
    rng: ChaCha8Rng,
}

impl RandomCop {
    pub fn new(seed: u64) -> Self {
        RandomCop {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// One uniformly random vertex from the closed neighborhood of `at`.
    pub fn random_step(&mut self, g: &GraphSpec, at: usize) -> usize {
        let mut options = Vec::with_capacity(2 * g.dimension() + 1);
        options.push(at);
        g.for_each_neighbor(at, |w| options.push(w));
        options[self.rng.random_range(0..options.len())]
    }
}

impl CopStrategy for RandomCop {
    fn name(&self) -> String {
        "random".into()
    }

    fn prepare(&mut self, _: &GraphSpec, _: usize) -> Result<(), ConfigError> {
        Ok(())
    }

    fn place(
        &mut self,
        g: &GraphSpec,
        k: usize,
        _: &mut Annotations,
    ) -> Result<Vec<usize>, StrategyError> {
        Ok((0..k)
            .map(|_| self.rng.random_range(0..g.vertex_count()))
            .collect())
    }

    fn step(&mut self, s: &GameState, _: &mut Annotations) -> Result<Vec<usize>, StrategyError> {
        Ok(s.cops
            .iter()
            .map(|&c| self.random_step(&s.graph, c))
            .collect())
    }

    fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;

    #[test]
    fn greedy_tie_break() {
        let g = GraphSpec::grid(&[3, 3]).unwrap();
        let m = greedy_moves(
            &g,
            &[g.index(&Vertex::from([0, 0]))],
            g.index(&Vertex::from([2, 2])),
        );
        assert_eq!(g.vertex(m[0]), Vertex::from([1, 0]));
    }

    #[test]
    fn adjacent_greedy_cop_captures() {
        let g = GraphSpec::grid(&[3, 3]).unwrap();
        let r = g.index(&Vertex::from([1, 1]));
        assert_eq!(
            greedy_moves(&g, &[g.index(&Vertex::from([1, 0]))], r),
            vec![r]
        );
    }

    #[test]
    fn random_step_is_uniform_on_closed_neighborhood() {
        let g = GraphSpec::grid(&[3, 3]).unwrap();
        let center = g.index(&Vertex::from([1, 1]));
        let mut cop = RandomCop::new(42);
        let mut counts = std::collections::BTreeMap::new();
        let trials = 100_000;
        for _ in 0..trials {
            let to = cop.random_step(&g, center);
            assert!(to == center || g.are_adjacent(center, to));
            *counts.entry(to).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 5);
        for &c in counts.values() {
            let frac = c as f64 / trials as f64;
            assert!((frac - 0.2).abs() < 0.02, "{frac}");
        }
    }

    #[test]
    fn random_is_reproducible() {
        let g = GraphSpec::grid(&[5, 5]).unwrap();
        let walk = |seed| {
            let mut cop = RandomCop::new(seed);
            let mut at = 12;
            (0..50)
                .map(|_| {
                    at = cop.random_step(&g, at);
                    at
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(walk(3), walk(3));
        assert_ne!(walk(3), walk(4));
    }
}
