//! Strategy interfaces shared by the engine, the strategy suites and the solver.
//!
//! Strategies work on vertex ids (see [`GraphSpec::index`]) rather than
//! coordinate tuples; the engine converts at its boundary.

use std::collections::BTreeMap;

use crate::engine::GameState;
use crate::error::{ConfigError, StrategyError};
use crate::graph::GraphSpec;

/// Free-form per-move notes written into the trace.
pub type Annotations = BTreeMap<String, String>;

pub trait CopStrategy: Send {
    fn name(&self) -> String;

    /// Validates the graph and cop count before the match starts.
    fn prepare(&mut self, g: &GraphSpec, k: usize) -> Result<(), ConfigError>;

    /// Initial positions; must have exactly `k` entries.
    fn place(
        &mut self,
        g: &GraphSpec,
        k: usize,
        notes: &mut Annotations,
    ) -> Result<Vec<usize>, StrategyError>;

    /// One destination per cop, each in the closed neighborhood of that cop.
    fn step(&mut self, s: &GameState, notes: &mut Annotations)
        -> Result<Vec<usize>, StrategyError>;

    fn reseed(&mut self, _seed: u64) {}

    /// Turns per-move invariant checks on or off.
    fn set_checks(&mut self, _on: bool) {}

    fn report(&self) -> InvariantReport {
        InvariantReport::default()
    }
}

pub trait RobberStrategy: Send {
    fn name(&self) -> String;

    fn prepare(&mut self, g: &GraphSpec, k: usize) -> Result<(), ConfigError>;

    /// Initial position given the cops' placement. `None` means every vertex
    /// is occupied.
    fn place(
        &mut self,
        g: &GraphSpec,
        cops: &[usize],
        notes: &mut Annotations,
    ) -> Result<Option<usize>, StrategyError>;

    /// Destination within the robber's cop-free component.
    fn step(&mut self, s: &GameState, notes: &mut Annotations) -> Result<usize, StrategyError>;

    fn reseed(&mut self, _seed: u64) {}

    fn set_checks(&mut self, _on: bool) {}

    fn report(&self) -> InvariantReport {
        InvariantReport::default()
    }
}

/// Counters kept by strategies that check their own invariants.
///
/// Keys starting with `violation.` count broken invariants; `fallback.` keys
/// count turns where a strategy degraded to a simpler rule.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantReport {
    pub counters: BTreeMap<String, u64>,
}

impl InvariantReport {
    pub fn bump(&mut self, key: &str) {
        self.add(key, 1);
    }

    pub fn add(&mut self, key: &str, n: u64) {
        *self.counters.entry(key.to_string()).or_insert(0) += n;
    }

    pub fn get(&self, key: &str) -> u64 {
        self.counters.get(key).copied().unwrap_or(0)
    }

    fn sum_prefix(&self, prefix: &str) -> u64 {
        self.counters
            .iter()
            .filter(|(k, _)| k.starts_with(prefix))
            .map(|(_, v)| v)
            .sum()
    }

    pub fn violations(&self) -> u64 {
        self.sum_prefix("violation.")
    }

    pub fn fallbacks(&self) -> u64 {
        self.sum_prefix("fallback.")
    }

    pub fn merge(&mut self, other: &InvariantReport) {
        for (k, v) in &other.counters {
            self.add(k, *v);
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations() == 0
    }
}

impl std::fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .counters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub(crate) fn note(notes: &mut Annotations, key: &str, value: impl ToString) {
    notes.insert(key.to_string(), value.to_string());
}
