//! JSON-lines match traces and replay through the engine.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::engine::{GameState, Outcome, Phase, Side};
use crate::error::ReplayError;
use crate::graph::{GraphSpec, Vertex};
use crate::strategy::Annotations;

pub const TRACE_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub graph: String,
    pub cop_strategy: String,
    pub robber_strategy: String,
    pub k: usize,
    pub max_rounds: usize,
    pub seed: u64,
    pub version: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub best_effort: bool,
}

/// The state right after one move, plus what the mover had to say about it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub round: usize,
    pub phase: String,
    pub cops: Vec<Vec<usize>>,
    pub robber: Option<Vec<usize>>,
    pub event: Option<String>,
    pub annotations: Annotations,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchTrace {
    pub header: TraceHeader,
    pub events: Vec<TraceEvent>,
}

impl MatchTrace {
    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("event serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<MatchTrace, ReplayError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or(ReplayError::Malformed {
            line: 1,
            message: "empty trace".into(),
        })?;
        let header: TraceHeader =
            serde_json::from_str(first).map_err(|e| ReplayError::Malformed {
                line: 1,
                message: e.to_string(),
            })?;
        let events = lines
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| ReplayError::Malformed {
                    line: i + 1,
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<TraceEvent>, _>>()?;
        Ok(MatchTrace { header, events })
    }

    /// The outcome recorded on the last event, if the match finished.
    pub fn outcome(&self) -> Option<Outcome> {
        let last = self.events.last()?;
        match last.event.as_deref()? {
            "capture" => Some(Outcome::Capture { round: last.round }),
            "timeout" => Some(Outcome::Timeout { rounds: last.round }),
            "fault" => {
                let side = match last.annotations.get("side").map(String::as_str) {
                    Some("robber") => Side::Robber,
                    _ => Side::Cops,
                };
                let message = last.annotations.get("error").cloned().unwrap_or_default();
                Some(Outcome::Fault { side, message })
            }
            _ => None,
        }
    }

    /// Number of completed robber turns.
    pub fn robber_turns(&self) -> usize {
        self.events
            .iter()
            .filter(|e| e.phase == Phase::RobberTurn.as_str())
            .count()
    }

    pub fn graph(&self) -> Result<GraphSpec, ReplayError> {
        self.header
            .graph
            .parse()
            .map_err(|e: crate::error::GraphError| ReplayError::Malformed {
                line: 1,
                message: e.to_string(),
            })
    }
}

fn ids(g: &GraphSpec, coords: &[Vec<usize>], line: usize) -> Result<Vec<usize>, ReplayError> {
    coords
        .iter()
        .map(|c| {
            g.try_index(&Vertex(c.clone()))
                .map_err(|e| ReplayError::Malformed {
                    line,
                    message: e.to_string(),
                })
        })
        .collect()
}

fn matches_event(s: &GameState, e: &TraceEvent) -> bool {
    let cops: Vec<Vec<usize>> = s.cops.iter().map(|&c| s.graph.vertex(c).0).collect();
    let robber = s.robber.map(|r| s.graph.vertex(r).0);
    cops == e.cops && robber == e.robber
}

/// Feeds every recorded move back through the engine, checking each
/// resulting state against the record. Returns the final state.
pub fn replay(trace: &MatchTrace) -> Result<GameState, ReplayError> {
    let g = Arc::new(trace.graph()?);
    let mut state = GameState::new(g.clone());
    for (i, e) in trace.events.iter().enumerate() {
        let line = i + 2;
        let rule = |source| ReplayError::Rule { line, source };
        if e.event.as_deref() == Some("fault") {
            if !matches_event(&state, e) {
                return Err(ReplayError::Mismatch { line });
            }
            continue;
        }
        let next = match e.phase.as_str() {
            "cop-placement" => state.place_cops(&ids(&g, &e.cops, line)?).map_err(rule)?,
            "robber-placement" => {
                let at = match &e.robber {
                    Some(r) => Some(ids(&g, std::slice::from_ref(r), line)?[0]),
                    None => None,
                };
                state.place_robber(at).map_err(rule)?
            }
            "cop-turn" => state.cop_move(&ids(&g, &e.cops, line)?).map_err(rule)?,
            "robber-turn" => {
                let r = e.robber.as_ref().ok_or(ReplayError::Mismatch { line })?;
                state
                    .robber_move(ids(&g, std::slice::from_ref(r), line)?[0])
                    .map_err(rule)?
            }
            other => {
                return Err(ReplayError::Malformed {
                    line,
                    message: format!("unknown phase {other:?}"),
                })
            }
        };
        let round_ok = match e.phase.as_str() {
            "robber-turn" => next.round == e.round + 1,
            "cop-turn" => next.round == e.round,
            _ => e.round == 0,
        };
        let captured = next.phase == Phase::Over(Side::Cops);
        if !matches_event(&next, e)
            || !round_ok
            || captured != (e.event.as_deref() == Some("capture"))
        {
            return Err(ReplayError::Mismatch { line });
        }
        state = next;
    }
    Ok(state)
}
