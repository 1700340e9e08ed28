//! Rules of the infinite-speed game and the match loop.
//!
//! A round is a cop turn followed by a robber turn. Round 0 is placement;
//! the first cop turn is round 1 and the counter advances after every
//! robber turn. Capture happens only when a cop steps onto the robber.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{ConfigError, RuleViolation};
use crate::graph::{blocked_mask, component_ids, GraphSpec, Vertex};
use crate::strategy::{Annotations, CopStrategy, RobberStrategy};
use crate::trace::{MatchTrace, TraceEvent, TraceHeader, TRACE_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Cops,
    Robber,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Cops => "cops",
            Side::Robber => "robber",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    CopPlacement,
    RobberPlacement,
    CopTurn,
    RobberTurn,
    Over(Side),
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::CopPlacement => "cop-placement",
            Phase::RobberPlacement => "robber-placement",
            Phase::CopTurn => "cop-turn",
            Phase::RobberTurn => "robber-turn",
            Phase::Over(Side::Cops) => "over-cops",
            Phase::Over(Side::Robber) => "over-robber",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An immutable game position. Cops and robber are stored as vertex ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState {
    pub graph: Arc<GraphSpec>,
    pub cops: Vec<usize>,
    pub robber: Option<usize>,
    pub phase: Phase,
    pub round: usize,
}

impl GameState {
    pub fn new(graph: Arc<GraphSpec>) -> Self {
        GameState {
            graph,
            cops: Vec::new(),
            robber: None,
            phase: Phase::CopPlacement,
            round: 0,
        }
    }

    /// A mid-game position with the given mover, mainly for tests and tools.
    pub fn at(
        graph: Arc<GraphSpec>,
        cops: &[Vertex],
        robber: &Vertex,
        phase: Phase,
    ) -> Result<Self, RuleViolation> {
        let cops = cops
            .iter()
            .map(|c| graph.try_index(c))
            .collect::<Result<Vec<_>, _>>()?;
        let robber = graph.try_index(robber)?;
        if phase == Phase::RobberTurn && cops.contains(&robber) {
            return Err(RuleViolation::Occupied(graph.vertex(robber)));
        }
        Ok(GameState {
            graph,
            cops,
            robber: Some(robber),
            phase,
            round: 1,
        })
    }

    fn expect(&self, phase: Phase) -> Result<(), RuleViolation> {
        if self.phase == phase {
            Ok(())
        } else {
            Err(RuleViolation::WrongPhase {
                expected: phase.as_str(),
                found: self.phase.to_string(),
            })
        }
    }

    pub fn cop_vertices(&self) -> Vec<Vertex> {
        self.cops.iter().map(|&c| self.graph.vertex(c)).collect()
    }

    pub fn robber_vertex(&self) -> Option<Vertex> {
        self.robber.map(|r| self.graph.vertex(r))
    }

    pub fn is_over(&self) -> bool {
        matches!(self.phase, Phase::Over(_))
    }

    pub fn place_cops(&self, cops: &[usize]) -> Result<GameState, RuleViolation> {
        self.expect(Phase::CopPlacement)?;
        for &c in cops {
            if c >= self.graph.vertex_count() {
                return Err(RuleViolation::Graph(crate::error::GraphError::Invalid(
                    format!("cop id {c} out of range"),
                )));
            }
        }
        Ok(GameState {
            cops: cops.to_vec(),
            phase: Phase::RobberPlacement,
            ..self.clone()
        })
    }

    /// Places the robber. `None` is legal only when every vertex holds a cop,
    /// and ends the game at once.
    pub fn place_robber(&self, at: Option<usize>) -> Result<GameState, RuleViolation> {
        self.expect(Phase::RobberPlacement)?;
        let occupied = blocked_mask(&self.graph, self.cops.iter().copied());
        match at {
            None => {
                if let Some(free) = occupied.iter().position(|&b| !b) {
                    return Err(RuleViolation::IllegalPlacement {
                        at: self.graph.vertex(free),
                    });
                }
                Ok(GameState {
                    phase: Phase::Over(Side::Cops),
                    ..self.clone()
                })
            }
            Some(r) => {
                if r >= self.graph.vertex_count() || occupied[r] {
                    return Err(RuleViolation::IllegalPlacement {
                        at: self.graph.vertex(r.min(self.graph.vertex_count() - 1)),
                    });
                }
                Ok(GameState {
                    robber: Some(r),
                    phase: Phase::CopTurn,
                    round: 1,
                    ..self.clone()
                })
            }
        }
    }

    pub fn cop_move(&self, dests: &[usize]) -> Result<GameState, RuleViolation> {
        self.expect(Phase::CopTurn)?;
        if dests.len() != self.cops.len() {
            return Err(RuleViolation::CopCount {
                expected: self.cops.len(),
                got: dests.len(),
            });
        }
        let g = &self.graph;
        for (i, (&from, &to)) in self.cops.iter().zip(dests).enumerate() {
            if to >= g.vertex_count() || (to != from && !g.are_adjacent(from, to)) {
                let to_v = if to < g.vertex_count() {
                    g.vertex(to)
                } else {
                    Vertex(vec![to])
                };
                return Err(RuleViolation::IllegalCopMove {
                    index: i,
                    from: g.vertex(from),
                    to: to_v,
                });
            }
        }
        let captured = self.robber.is_some_and(|r| dests.contains(&r));
        let phase = if captured {
            Phase::Over(Side::Cops)
        } else {
            Phase::RobberTurn
        };
        Ok(GameState {
            cops: dests.to_vec(),
            phase,
            ..self.clone()
        })
    }

    pub fn robber_move(&self, dest: usize) -> Result<GameState, RuleViolation> {
        self.expect(Phase::RobberTurn)?;
        let g = &self.graph;
        let from = self.robber.expect("robber placed before robber turn");
        let illegal = || RuleViolation::IllegalRobberMove {
            from: g.vertex(from),
            to: if dest < g.vertex_count() {
                g.vertex(dest)
            } else {
                Vertex(vec![dest])
            },
        };
        if dest >= g.vertex_count() {
            return Err(illegal());
        }
        if dest != from {
            let blocked = blocked_mask(g, self.cops.iter().copied());
            if blocked[dest] || !reaches(g, &blocked, from, dest) {
                return Err(illegal());
            }
        }
        Ok(GameState {
            robber: Some(dest),
            phase: Phase::CopTurn,
            round: self.round + 1,
            ..self.clone()
        })
    }
}

fn reaches(g: &GraphSpec, blocked: &[bool], from: usize, to: usize) -> bool {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(u) = stack.pop() {
        if u == to {
            return true;
        }
        g.for_each_neighbor(u, |w| {
            if !blocked[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        });
    }
    false
}

/// Vertex ids reachable from `from` avoiding `cops`, sorted ascending.
pub fn reachable_ids(
    g: &GraphSpec,
    cops: &[usize],
    from: usize,
) -> Result<Vec<usize>, RuleViolation> {
    if cops.contains(&from) {
        return Err(RuleViolation::Occupied(g.vertex(from)));
    }
    let blocked = blocked_mask(g, cops.iter().copied());
    let mut comp = component_ids(g, &blocked, from);
    comp.sort_unstable();
    Ok(comp)
}

/// The component of `from` in the graph with cop vertices deleted.
pub fn reachable_set(
    g: &GraphSpec,
    cops: &[Vertex],
    from: &Vertex,
) -> Result<BTreeSet<Vertex>, RuleViolation> {
    let cop_ids = cops
        .iter()
        .map(|c| g.try_index(c))
        .collect::<Result<Vec<_>, _>>()?;
    let start = g.try_index(from)?;
    Ok(reachable_ids(g, &cop_ids, start)?
        .into_iter()
        .map(|id| g.vertex(id))
        .collect())
}

pub fn apply_cop_move(s: &GameState, dests: &[Vertex]) -> Result<GameState, RuleViolation> {
    let ids = dests
        .iter()
        .map(|d| s.graph.try_index(d))
        .collect::<Result<Vec<_>, _>>()?;
    s.cop_move(&ids)
}

pub fn apply_robber_move(s: &GameState, dest: &Vertex) -> Result<GameState, RuleViolation> {
    let id = s.graph.try_index(dest)?;
    s.robber_move(id)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Capture during the given round; 0 means no free vertex at placement.
    Capture {
        round: usize,
    },
    Timeout {
        rounds: usize,
    },
    Fault {
        side: Side,
        message: String,
    },
}

impl Outcome {
    pub fn is_capture(&self) -> bool {
        matches!(self, Outcome::Capture { .. })
    }

    pub fn is_fault(&self) -> bool {
        matches!(self, Outcome::Fault { .. })
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Capture { round } => write!(f, "Capture({round})"),
            Outcome::Timeout { rounds } => write!(f, "Timeout({rounds})"),
            Outcome::Fault { side, message } => write!(f, "StrategyFault({side}: {message})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MatchConfig {
    pub k: usize,
    /// Defaults to four times the vertex count.
    pub max_rounds: Option<usize>,
    pub seed: u64,
    /// Recorded in the trace header so re-simulation builds the same strategies.
    pub best_effort: bool,
}

impl MatchConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        MatchConfig {
            k,
            max_rounds: None,
            seed,
            best_effort: false,
        }
    }

    pub fn max_rounds(mut self, rounds: usize) -> Self {
        self.max_rounds = Some(rounds);
        self
    }

    pub fn best_effort(mut self, on: bool) -> Self {
        self.best_effort = on;
        self
    }
}

/// Seed handed to the robber, derived from the match seed.
pub fn robber_seed(seed: u64) -> u64 {
    seed ^ 0x9E37_79B9_7F4A_7C15
}

fn event(
    s: &GameState,
    round: usize,
    phase: Phase,
    tag: Option<&str>,
    notes: Annotations,
) -> TraceEvent {
    TraceEvent {
        round,
        phase: phase.as_str().to_string(),
        cops: s.cops.iter().map(|&c| s.graph.vertex(c).0).collect(),
        robber: s.robber.map(|r| s.graph.vertex(r).0),
        event: tag.map(str::to_string),
        annotations: notes,
    }
}

fn fault_event(s: &GameState, round: usize, phase: Phase, side: Side, message: &str) -> TraceEvent {
    let mut notes = Annotations::new();
    notes.insert("side".into(), side.to_string());
    notes.insert("error".into(), message.to_string());
    event(s, round, phase, Some("fault"), notes)
}

/// Plays one match. Configuration problems are returned as errors; anything
/// that goes wrong during play ends the trace with a fault event.
pub fn run_match(
    g: &GraphSpec,
    cop: &mut dyn CopStrategy,
    robber: &mut dyn RobberStrategy,
    cfg: &MatchConfig,
) -> Result<MatchTrace, ConfigError> {
    if cfg.k == 0 {
        return Err(ConfigError::new("at least one cop is required"));
    }
    let max_rounds = cfg.max_rounds.unwrap_or(4 * g.vertex_count());
    if max_rounds == 0 {
        return Err(ConfigError::new("max_rounds must be positive"));
    }
    cop.prepare(g, cfg.k)?;
    robber.prepare(g, cfg.k)?;
    cop.reseed(cfg.seed);
    robber.reseed(robber_seed(cfg.seed));

    let header = TraceHeader {
        graph: g.to_string(),
        cop_strategy: cop.name(),
        robber_strategy: robber.name(),
        k: cfg.k,
        max_rounds,
        seed: cfg.seed,
        version: TRACE_VERSION.to_string(),
        best_effort: cfg.best_effort,
    };
    let mut events = Vec::new();
    let graph = Arc::new(g.clone());
    let mut state = GameState::new(graph);

    let mut notes = Annotations::new();
    let placed = cop.place(g, cfg.k, &mut notes);
    let placed = match placed {
        Ok(p) if p.len() == cfg.k => p,
        Ok(p) => {
            let msg = format!("placed {} cops, expected {}", p.len(), cfg.k);
            events.push(fault_event(
                &state,
                0,
                Phase::CopPlacement,
                Side::Cops,
                &msg,
            ));
            return Ok(MatchTrace { header, events });
        }
        Err(e) => {
            events.push(fault_event(
                &state,
                0,
                Phase::CopPlacement,
                Side::Cops,
                &e.0,
            ));
            return Ok(MatchTrace { header, events });
        }
    };
    state = match state.place_cops(&placed) {
        Ok(s) => s,
        Err(e) => {
            events.push(fault_event(
                &state,
                0,
                Phase::CopPlacement,
                Side::Cops,
                &e.to_string(),
            ));
            return Ok(MatchTrace { header, events });
        }
    };
    events.push(event(&state, 0, Phase::CopPlacement, None, notes));

    let all_occupied = blocked_mask(g, state.cops.iter().copied())
        .iter()
        .all(|&b| b);
    if all_occupied {
        let s = state.place_robber(None).expect("graph fully occupied");
        events.push(event(
            &s,
            0,
            Phase::RobberPlacement,
            Some("capture"),
            Annotations::new(),
        ));
        return Ok(MatchTrace { header, events });
    }
    let mut notes = Annotations::new();
    let spot = match robber.place(g, &state.cops, &mut notes) {
        Ok(spot) => spot,
        Err(e) => {
            events.push(fault_event(
                &state,
                0,
                Phase::RobberPlacement,
                Side::Robber,
                &e.0,
            ));
            return Ok(MatchTrace { header, events });
        }
    };
    state = match state.place_robber(spot) {
        Ok(s) => s,
        Err(e) => {
            events.push(fault_event(
                &state,
                0,
                Phase::RobberPlacement,
                Side::Robber,
                &e.to_string(),
            ));
            return Ok(MatchTrace { header, events });
        }
    };
    events.push(event(&state, 0, Phase::RobberPlacement, None, notes));

    loop {
        let round = state.round;
        let mut notes = Annotations::new();
        let next = cop
            .step(&state, &mut notes)
            .map_err(|e| e.0)
            .and_then(|d| state.cop_move(&d).map_err(|e| e.to_string()));
        match next {
            Ok(s) => state = s,
            Err(msg) => {
                events.push(fault_event(&state, round, Phase::CopTurn, Side::Cops, &msg));
                return Ok(MatchTrace { header, events });
            }
        }
        if state.is_over() {
            events.push(event(&state, round, Phase::CopTurn, Some("capture"), notes));
            return Ok(MatchTrace { header, events });
        }
        events.push(event(&state, round, Phase::CopTurn, None, notes));

        let mut notes = Annotations::new();
        let next = robber
            .step(&state, &mut notes)
            .map_err(|e| e.0)
            .and_then(|d| state.robber_move(d).map_err(|e| e.to_string()));
        match next {
            Ok(s) => state = s,
            Err(msg) => {
                events.push(fault_event(
                    &state,
                    round,
                    Phase::RobberTurn,
                    Side::Robber,
                    &msg,
                ));
                return Ok(MatchTrace { header, events });
            }
        }
        let tag = (round >= max_rounds).then_some("timeout");
        events.push(event(&state, round, Phase::RobberTurn, tag, notes));
        if tag.is_some() {
            return Ok(MatchTrace { header, events });
        }
    }
}
