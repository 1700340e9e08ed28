//! Strategies read off a [`SolvedTable`].

use std::sync::Arc;

use crate::engine::{reachable_ids, GameState};
use crate::error::{ConfigError, StrategyError};
use crate::graph::{blocked_mask, GraphSpec};
use crate::strategy::{note, Annotations, CopStrategy, RobberStrategy};

use super::SolvedTable;

fn check_table(t: &SolvedTable, g: &GraphSpec, k: usize) -> Result<(), ConfigError> {
    if t.graph() != g || t.cop_count() != k {
        return Err(ConfigError::new(format!(
            "table solved for {} with {} cops, asked for {g} with {k}",
            t.graph(),
            t.cop_count()
        )));
    }
    Ok(())
}

/// Places at the table's witness and always moves to the robber node that is
/// lost soonest.
pub struct OptimalCop {
    table: Arc<SolvedTable>,
}

impl OptimalCop {
    pub fn new(table: Arc<SolvedTable>) -> Self {
        OptimalCop { table }
    }
}

impl CopStrategy for OptimalCop {
    fn name(&self) -> String {
        "optimal".into()
    }

    fn prepare(&mut self, g: &GraphSpec, k: usize) -> Result<(), ConfigError> {
        check_table(&self.table, g, k)
    }

    fn place(
        &mut self,
        _g: &GraphSpec,
        k: usize,
        notes: &mut Annotations,
    ) -> Result<Vec<usize>, StrategyError> {
        match self.table.witness() {
            Some((cops, rounds)) => {
                note(notes, "capture-within", rounds);
                Ok(cops)
            }
            // Robber wins: any placement is as good as another.
            None => Ok(vec![0; k]),
        }
    }

    fn step(
        &mut self,
        s: &GameState,
        notes: &mut Annotations,
    ) -> Result<Vec<usize>, StrategyError> {
        let robber = s
            .robber
            .ok_or_else(|| StrategyError::new("robber not placed"))?;
        if let Some(i) = s.cops.iter().position(|&c| s.graph.are_adjacent(c, robber)) {
            let mut d = s.cops.clone();
            d[i] = robber;
            return Ok(d);
        }
        let t = &self.table;
        let mut best: Option<(u16, usize, Vec<usize>)> = None;
        t.for_each_joint_move(&s.cops, |d| {
            let rank = t.rank(d);
            let Some(lvl) = t.node_level(rank, robber) else {
                return;
            };
            if lvl == 0 {
                return;
            }
            if best
                .as_ref()
                .is_none_or(|(bl, br, _)| (lvl, rank) < (*bl, *br))
            {
                best = Some((lvl, rank, d.to_vec()));
            }
        });
        match best {
            Some((lvl, _, d)) => {
                note(notes, "level", lvl);
                Ok(d)
            }
            None => Ok(s.cops.clone()),
        }
    }
}

/// Survives if it can; otherwise delays capture as long as possible.
pub struct OptimalRobber {
    table: Arc<SolvedTable>,
}

impl OptimalRobber {
    pub fn new(table: Arc<SolvedTable>) -> Self {
        OptimalRobber { table }
    }

    /// Lowest-id candidate with level 0, else the highest level.
    fn choose(
        &self,
        cops: &[usize],
        candidates: impl Iterator<Item = usize>,
    ) -> Option<(usize, u16)> {
        let mut best: Option<(usize, u16)> = None;
        for v in candidates {
            let Some(l) = self.table.level(cops, v) else {
                continue;
            };
            let better = match best {
                None => true,
                Some((_, 0)) => false,
                Some((_, b)) => l == 0 || l > b,
            };
            if better {
                best = Some((v, l));
            }
        }
        best
    }
}

impl RobberStrategy for OptimalRobber {
    fn name(&self) -> String {
        "optimal".into()
    }

    fn prepare(&mut self, g: &GraphSpec, k: usize) -> Result<(), ConfigError> {
        check_table(&self.table, g, k)
    }

    fn place(
        &mut self,
        g: &GraphSpec,
        cops: &[usize],
        notes: &mut Annotations,
    ) -> Result<Option<usize>, StrategyError> {
        let mask = blocked_mask(g, cops.iter().copied());
        let pick = self.choose(cops, (0..g.vertex_count()).filter(|&v| !mask[v]));
        if let Some((_, l)) = pick {
            note(notes, "level", l);
        }
        Ok(pick.map(|(v, _)| v))
    }

    fn step(&mut self, s: &GameState, notes: &mut Annotations) -> Result<usize, StrategyError> {
        let robber = s
            .robber
            .ok_or_else(|| StrategyError::new("robber not placed"))?;
        let reach = reachable_ids(&s.graph, &s.cops, robber)
            .map_err(|e| StrategyError::new(e.to_string()))?;
        let (v, l) = self
            .choose(&s.cops, reach.into_iter())
            .ok_or_else(|| StrategyError::new("no reachable vertex"))?;
        note(notes, "level", l);
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run_match, MatchConfig, Outcome};
    use crate::robbers::MaxComponent;
    use crate::solver::SolveOptions;

    fn table(spec: &str, k: usize) -> Arc<SolvedTable> {
        Arc::new(SolvedTable::build(&spec.parse().unwrap(), k, &SolveOptions::default()).unwrap())
    }

    #[test]
    fn optimal_cops_beat_a_heuristic_robber_within_the_bound() {
        let t = table("grid:3x3", 2);
        let (_, rounds) = t.witness().expect("two cops win on 3x3");
        let g = t.graph().clone();
        let mut cop = OptimalCop::new(t.clone());
        let mut robber = MaxComponent::new();
        let trace = run_match(&g, &mut cop, &mut robber, &MatchConfig::new(2, 1)).unwrap();
        match trace.outcome() {
            Some(Outcome::Capture { round }) => assert!(round <= rounds),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn optimal_robber_survives_one_cop_on_a_cycle() {
        let t = table("cube:2", 1);
        let g = t.graph().clone();
        let mut cop = OptimalCop::new(t.clone());
        let mut robber = OptimalRobber::new(t);
        let trace = run_match(
            &g,
            &mut cop,
            &mut robber,
            &MatchConfig::new(1, 0).max_rounds(20),
        )
        .unwrap();
        assert_eq!(trace.outcome(), Some(Outcome::Timeout { rounds: 20 }));
    }

    #[test]
    fn mismatched_table_is_a_config_error() {
        let t = table("grid:2x2", 1);
        let g: GraphSpec = "grid:3x3".parse().unwrap();
        assert!(OptimalCop::new(t.clone()).prepare(&g, 1).is_err());
        let same: GraphSpec = "grid:2x2".parse().unwrap();
        assert!(OptimalRobber::new(t).prepare(&same, 2).is_err());
    }
}
