use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("cannot parse graph: {0}")]
    Parse(String),
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("vertex {vertex} is not in {graph}")]
    InvalidVertex { vertex: Vertex, graph: String },
    #[error("{0}")]
    Domain(String),
}

/// A move that the rules forbid, or a call made in the wrong phase.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleViolation {
    #[error("expected phase {expected}, found {found}")]
    WrongPhase {
        expected: &'static str,
        found: String,
    },
    #[error("expected {expected} cop destinations, got {got}")]
    CopCount { expected: usize, got: usize },
    #[error("cop {index} cannot move from {from} to {to}")]
    IllegalCopMove {
        index: usize,
        from: Vertex,
        to: Vertex,
    },
    #[error("robber cannot move from {from} to {to}")]
    IllegalRobberMove { from: Vertex, to: Vertex },
    #[error("robber cannot be placed on {at}")]
    IllegalPlacement { at: Vertex },
    #[error("vertex {0} is occupied by a cop")]
    Occupied(Vertex),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A strategy that cannot be used with the requested graph or cop count.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

impl ConfigError {
    pub fn new(msg: impl Into<String>) -> Self {
        ConfigError(msg.into())
    }
}

impl From<GraphError> for ConfigError {
    fn from(e: GraphError) -> Self {
        ConfigError(e.to_string())
    }
}

/// A strategy failed while playing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct StrategyError(pub String);

impl StrategyError {
    pub fn new(msg: impl Into<String>) -> Self {
        StrategyError(msg.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("state space estimate {estimate} exceeds cap {cap}")]
    TooLarge { estimate: u128, cap: u128 },
    #[error("solver produced an unverifiable witness: {0}")]
    Verification(String),
    /// Every cop count up to `losing_through` was solved as a robber win
    /// before the search stopped.
    #[error("robber wins against up to {losing_through} cops; next count failed: {source}")]
    Partial {
        losing_through: usize,
        source: Box<SolveError>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("{0}")]
    Domain(String),
    #[error("search over {subsets} subsets exceeds cap {cap}")]
    TooLarge { subsets: u128, cap: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("trace line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("trace line {line}: {source}")]
    Rule { line: usize, source: RuleViolation },
    #[error("trace line {line}: recorded state differs from replayed state")]
    Mismatch { line: usize },
    #[error("re-simulated trace differs from the recorded one at line {line}")]
    Diverged { line: usize },
    #[error(transparent)]
    Config(#[from] ConfigError),
}
