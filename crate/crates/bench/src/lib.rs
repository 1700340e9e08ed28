//! Fixtures shared by the benchmarks.

use gridpursuit::registry::{cop_strategy, robber_strategy};
use gridpursuit::{run_match, GraphSpec, MatchConfig, MatchTrace};

/// Plays one match between registry strategies.
pub fn play(spec: &str, cop: &str, robber: &str, k: usize, seed: u64, rounds: usize) -> MatchTrace {
    let g: GraphSpec = spec.parse().expect("graph spec");
    let mut c = cop_strategy(cop, &g, k, true).expect("cop strategy");
    let mut r = robber_strategy(robber, &g, k, true).expect("robber strategy");
    run_match(
        &g,
        c.as_mut(),
        r.as_mut(),
        &MatchConfig::new(k, seed).max_rounds(rounds),
    )
    .expect("match runs")
}
