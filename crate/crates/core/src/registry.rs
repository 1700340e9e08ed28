//! Strategies by name, as used by the CLI and trace re-simulation.

use std::sync::Arc;

use crate::cops::{Blockade, DiagonalPairs, GreedyCop, RandomCop, RowSweep, TorusTwoRows};
use crate::engine::{run_match, MatchConfig};
use crate::error::{ConfigError, ReplayError};
use crate::graph::GraphSpec;
use crate::robbers::{
    parse_clamp, Grid2dEvader, Grid3dEvader, MaxComponent, PotentialEvader, RandomRobber,
    RetractLift, Stationary, TorusEvader,
};
use crate::solver::{OptimalCop, OptimalRobber, SolveOptions, SolvedTable};
use crate::strategy::{CopStrategy, RobberStrategy};
use crate::trace::MatchTrace;

pub const COP_STRATEGIES: &[&str] = &[
    "row-sweep",
    "diagonal-pairs",
    "torus-two-rows",
    "blockade-3d",
    "blockade-ddim",
    "greedy",
    "random",
    "optimal",
];

pub const ROBBER_STRATEGIES: &[&str] = &[
    "grid2d-evader",
    "torus-evader",
    "grid3d-evader",
    "cube-potential",
    "retract:<inner>/<clamp>",
    "max-component",
    "stationary",
    "random",
    "optimal",
];

fn unknown(kind: &str, name: &str, known: &[&str]) -> ConfigError {
    ConfigError::new(format!(
        "unknown {kind} strategy {name:?}; known: {}",
        known.join(", ")
    ))
}

fn solved(g: &GraphSpec, k: usize) -> Result<Arc<SolvedTable>, ConfigError> {
    SolvedTable::build(g, k, &SolveOptions::default())
        .map(Arc::new)
        .map_err(|e| ConfigError::new(format!("optimal play needs a solved table: {e}")))
}

/// Builds a cop strategy. `g` and `k` are only used by `optimal`, which
/// solves the game up front.
pub fn cop_strategy(
    name: &str,
    g: &GraphSpec,
    k: usize,
    best_effort: bool,
) -> Result<Box<dyn CopStrategy>, ConfigError> {
    Ok(match name {
        "row-sweep" => Box::new(RowSweep::new()),
        "diagonal-pairs" => Box::new(DiagonalPairs::new()),
        "torus-two-rows" => Box::new(TorusTwoRows::new()),
        "blockade-3d" => Box::new(Blockade::three_d().best_effort(best_effort)),
        "blockade-ddim" => Box::new(Blockade::any_dim().best_effort(best_effort)),
        "greedy" => Box::new(GreedyCop::new()),
        "random" => Box::new(RandomCop::new(0)),
        "optimal" => Box::new(OptimalCop::new(solved(g, k)?)),
        _ => return Err(unknown("cop", name, COP_STRATEGIES)),
    })
}

pub fn robber_strategy(
    name: &str,
    g: &GraphSpec,
    k: usize,
    best_effort: bool,
) -> Result<Box<dyn RobberStrategy>, ConfigError> {
    if let Some(rest) = name.strip_prefix("retract:") {
        let (inner, clamp) = rest.rsplit_once('/').ok_or_else(|| {
            ConfigError::new(format!("expected retract:<inner>/<clamp>, got {name:?}"))
        })?;
        let clamp = parse_clamp(clamp)?;
        // The inner strategy plays on the clamped grid.
        let h = GraphSpec::grid(&clamp).map_err(ConfigError::from)?;
        let inner = robber_strategy(inner, &h, k, best_effort)?;
        return Ok(Box::new(RetractLift::new(inner, clamp)));
    }
    Ok(match name {
        "grid2d-evader" => Box::new(Grid2dEvader::new().best_effort(best_effort)),
        "torus-evader" => Box::new(TorusEvader::new().best_effort(best_effort)),
        "grid3d-evader" => Box::new(Grid3dEvader::new().best_effort(best_effort)),
        "cube-potential" => Box::new(PotentialEvader::new()),
        "max-component" => Box::new(MaxComponent::new()),
        "stationary" => Box::new(Stationary::new()),
        "random" => Box::new(RandomRobber::new(0)),
        "optimal" => Box::new(OptimalRobber::new(solved(g, k)?)),
        _ => return Err(unknown("robber", name, ROBBER_STRATEGIES)),
    })
}

/// Plays the match described by a trace header again and checks that it
/// produces the same events.
pub fn resimulate(trace: &MatchTrace) -> Result<MatchTrace, ReplayError> {
    let h = &trace.header;
    let g = trace.graph()?;
    let mut cop = cop_strategy(&h.cop_strategy, &g, h.k, h.best_effort)?;
    let mut robber = robber_strategy(&h.robber_strategy, &g, h.k, h.best_effort)?;
    let cfg = MatchConfig::new(h.k, h.seed)
        .max_rounds(h.max_rounds)
        .best_effort(h.best_effort);
    let again = run_match(&g, cop.as_mut(), robber.as_mut(), &cfg)?;
    if again.header != trace.header {
        return Err(ReplayError::Diverged { line: 1 });
    }
    let n = again.events.len().max(trace.events.len());
    for i in 0..n {
        if again.events.get(i) != trace.events.get(i) {
            return Err(ReplayError::Diverged { line: i + 2 });
        }
    }
    Ok(again)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_name_builds() {
        let g = GraphSpec::grid(&[3, 3]).unwrap();
        for name in COP_STRATEGIES {
            assert_eq!(cop_strategy(name, &g, 2, false).unwrap().name(), *name);
        }
        for name in ROBBER_STRATEGIES
            .iter()
            .filter(|n| !n.starts_with("retract"))
        {
            assert_eq!(robber_strategy(name, &g, 2, false).unwrap().name(), *name);
        }
        let r = robber_strategy("retract:grid2d-evader/7x7", &g, 5, false).unwrap();
        assert_eq!(r.name(), "retract:grid2d-evader/7x7");
    }

    #[test]
    fn unknown_names_list_the_registry() {
        let g = GraphSpec::grid(&[3, 3]).unwrap();
        let e = cop_strategy("nope", &g, 1, false).err().unwrap();
        assert!(e.0.contains("row-sweep") && e.0.contains("optimal"));
        let e = robber_strategy("retract:nope/2x2", &g, 1, false)
            .err()
            .unwrap();
        assert!(e.0.contains("max-component"));
    }

    #[test]
    fn resimulation_reproduces_a_random_match() {
        let g = GraphSpec::grid(&[5, 5]).unwrap();
        let mut cop = cop_strategy("random", &g, 2, false).unwrap();
        let mut robber = robber_strategy("random", &g, 2, false).unwrap();
        let t = run_match(
            &g,
            cop.as_mut(),
            robber.as_mut(),
            &MatchConfig::new(2, 9).max_rounds(30),
        )
        .unwrap();
        assert_eq!(resimulate(&t).unwrap(), t);
        let mut tampered = t.clone();
        tampered.header.seed = 10;
        assert!(resimulate(&tampered).is_err());
    }
}
