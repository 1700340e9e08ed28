//! Playing a strategy for a smaller grid `H` inside a larger grid `G`.
//!
//! `G` is mapped onto `H` by clamping every coordinate to `H`'s side length.
//! The inner strategy sees the cops' images under that map and its moves are
//! played unchanged, so the robber never leaves `H`.

use std::sync::Arc;

use crate::engine::{GameState, Phase};
use crate::error::{ConfigError, StrategyError};
use crate::graph::{GraphSpec, Vertex};
use crate::strategy::{note, Annotations, InvariantReport, RobberStrategy};

use super::heuristics::refuge_step;

/// Parses a clamp such as `7x7`.
pub fn parse_clamp(text: &str) -> Result<Vec<usize>, ConfigError> {
    let lens: Result<Vec<usize>, _> = text.split('x').map(|p| p.parse::<usize>()).collect();
    match lens {
        Ok(l) if !l.is_empty() && l.iter().all(|&x| x >= 1) => Ok(l),
        _ => Err(ConfigError::new(format!(
            "bad clamp {text:?}, expected side lengths like 7x7"
        ))),
    }
}

pub struct RetractLift {
    inner: Box<dyn RobberStrategy>,
    clamp: Vec<usize>,
    target: Option<Arc<GraphSpec>>,
    checks: bool,
    report: InvariantReport,
    images: Vec<usize>,
}

impl RetractLift {
    pub fn new(inner: Box<dyn RobberStrategy>, clamp: Vec<usize>) -> Self {
        RetractLift {
            inner,
            clamp,
            target: None,
            checks: true,
            report: InvariantReport::default(),
            images: Vec::new(),
        }
    }

    fn target(&self) -> &GraphSpec {
        self.target.as_deref().expect("prepared")
    }

    /// Image in `H` of vertex `id` of `g`.
    fn project(&self, g: &GraphSpec, id: usize) -> usize {
        let h = self.target();
        let coords: Vec<usize> = (0..g.dimension())
            .map(|a| g.coord(id, a).min(self.clamp[a] - 1))
            .collect();
        h.index(&Vertex(coords))
    }

    /// Vertex of `g` with the same coordinates as `id` in `H`.
    fn embed(&self, g: &GraphSpec, id: usize) -> usize {
        g.index(&self.target().vertex(id))
    }

    /// Every edge of `g` maps to an edge or a single vertex of `H`, and `H`
    /// is fixed pointwise.
    fn validate(&self, g: &GraphSpec) -> Result<(), ConfigError> {
        let h = self.target();
        for u in 0..g.vertex_count() {
            let pu = self.project(g, u);
            let mut bad = None;
            g.for_each_neighbor(u, |w| {
                let pw = self.project(g, w);
                if pu != pw && !h.are_adjacent(pu, pw) {
                    bad = Some(w);
                }
            });
            if let Some(w) = bad {
                return Err(ConfigError::new(format!(
                    "clamp breaks the edge {}-{}",
                    g.vertex(u),
                    g.vertex(w)
                )));
            }
        }
        for v in 0..h.vertex_count() {
            if self.project(g, self.embed(g, v)) != v {
                return Err(ConfigError::new(format!("clamp moves {}", h.vertex(v))));
            }
        }
        Ok(())
    }
}

impl RobberStrategy for RetractLift {
    fn name(&self) -> String {
        let clamp: Vec<String> = self.clamp.iter().map(|l| l.to_string()).collect();
        format!("retract:{}/{}", self.inner.name(), clamp.join("x"))
    }

    fn prepare(&mut self, g: &GraphSpec, k: usize) -> Result<(), ConfigError> {
        if !g.is_grid() {
            return Err(ConfigError::new(format!("retract needs a grid, got {g}")));
        }
        if self.clamp.len() != g.dimension()
            || self.clamp.iter().enumerate().any(|(a, &l)| l > g.len(a))
        {
            return Err(ConfigError::new(format!(
                "clamp {:?} does not fit inside {g}",
                self.clamp
            )));
        }
        let h = GraphSpec::grid(&self.clamp).map_err(ConfigError::from)?;
        self.target = Some(Arc::new(h));
        self.validate(g)?;
        self.report = InvariantReport::default();
        self.images.clear();
        let h = self.target.clone().expect("prepared");
        self.inner.prepare(&h, k)
    }

    fn place(
        &mut self,
        g: &GraphSpec,
        cops: &[usize],
        notes: &mut Annotations,
    ) -> Result<Option<usize>, StrategyError> {
        self.images = cops.iter().map(|&c| self.project(g, c)).collect();
        let h = self.target.clone().expect("prepared");
        Ok(self
            .inner
            .place(&h, &self.images, notes)?
            .map(|v| self.embed(g, v)))
    }

    fn step(&mut self, s: &GameState, notes: &mut Annotations) -> Result<usize, StrategyError> {
        let g = &s.graph;
        let robber = s
            .robber
            .ok_or_else(|| StrategyError::new("robber not placed"))?;
        let h = self.target.clone().expect("prepared");
        let images: Vec<usize> = s.cops.iter().map(|&c| self.project(g, c)).collect();
        let inside = self.project(g, robber);
        if self.checks {
            self.report.bump("check.inside");
            if self.embed(g, inside) != robber {
                self.report.bump("violation.robber-left-subgraph");
            }
            self.report.bump("check.image-moves");
            let legal = self.images.len() == images.len()
                && self
                    .images
                    .iter()
                    .zip(&images)
                    .all(|(&a, &b)| a == b || h.are_adjacent(a, b));
            if !legal {
                self.report.bump("violation.image-move-illegal");
            }
        }
        self.images = images.clone();
        if images.contains(&inside) {
            // The images caught the inner robber; keep running on the real graph.
            self.report.bump("fallback.image-capture");
            note(notes, "fallback", "image-capture");
            return refuge_step(s);
        }
        let shadow = GameState {
            graph: h,
            cops: images,
            robber: Some(inside),
            phase: Phase::RobberTurn,
            round: s.round,
        };
        let to = self.inner.step(&shadow, notes)?;
        Ok(self.embed(g, to))
    }

    fn reseed(&mut self, seed: u64) {
        self.inner.reseed(seed);
    }

    fn set_checks(&mut self, on: bool) {
        self.checks = on;
        self.inner.set_checks(on);
    }

    fn report(&self) -> InvariantReport {
        let mut r = self.report.clone();
        r.merge(&self.inner.report());
        r
    }
}
