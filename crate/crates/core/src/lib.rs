//! Infinite-speed cops and robbers on Cartesian products of paths and cycles.
//!
//! The crate is organized bottom-up: [`graph`] holds the implicit product
//! graphs, [`engine`] the game rules and match loop, [`cops`] and [`robbers`]
//! the strategies, [`solver`] the exact retrograde solver and [`lattice`] the
//! level-set counting used by the blockade strategies.

pub mod cops;
pub mod engine;
pub mod error;
pub mod graph;
pub mod lattice;
pub mod registry;
pub mod render;
pub mod robbers;
pub mod solver;
pub mod strategy;
pub mod trace;

pub use engine::{
    apply_cop_move, apply_robber_move, reachable_ids, reachable_set, run_match, GameState,
    MatchConfig, Outcome, Phase, Side,
};
pub use error::{
    ConfigError, CountError, GraphError, ReplayError, RuleViolation, SolveError, StrategyError,
};
pub use graph::{box_vertices, interior, Dim, GraphSpec, GridBox, Vertex};
pub use render::render_ascii;
pub use solver::{cop_number, solve_game, CopNumber, SolveOptions, SolveResult, SolvedTable};
pub use strategy::{Annotations, CopStrategy, InvariantReport, RobberStrategy};
pub use trace::{MatchTrace, TraceEvent, TraceHeader};
