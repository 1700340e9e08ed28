//! Potential-guided evasion on the hypercube.
//!
//! A cop at distance `t` from `v` contributes `1` if `t <= 1` and
//! `1 / C(n, t - 1)` otherwise; the robber keeps the total below one half.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::engine::{reachable_ids, GameState};
use crate::error::{ConfigError, GraphError, StrategyError};
use crate::graph::{blocked_mask, GraphSpec, Vertex};
use crate::lattice::binomial;
use crate::strategy::{note, Annotations, InvariantReport, RobberStrategy};

fn cop_weight(n: usize, dist: usize) -> BigRational {
    if dist <= 1 {
        BigRational::one()
    } else {
        BigRational::new(BigInt::one(), binomial(n as i64, dist as i64 - 1))
    }
}

/// Exact potential of `v` against `cops` on a hypercube.
pub fn potential(g: &GraphSpec, cops: &[Vertex], v: &Vertex) -> Result<BigRational, GraphError> {
    if !g.is_hypercube() {
        return Err(GraphError::Domain(format!(
            "potential is defined on hypercubes only, got {g}"
        )));
    }
    let n = g.dimension();
    let mut total = BigRational::zero();
    for c in cops {
        total += cop_weight(n, g.distance(c, v)?);
    }
    Ok(total)
}

/// `floor(2^(n-3) / (n ln n)) - 1`, or 0 when that is negative.
pub fn cube_cop_budget(n: usize) -> usize {
    if n < 3 {
        return 0;
    }
    let x = (n as f64 - 3.0).exp2() / (n as f64 * (n as f64).ln());
    (x.floor() as usize).saturating_sub(1)
}

/// Potentials scaled by the lcm of `C(n, 0..n)`, so a whole sum is an integer.
#[derive(Clone, Debug)]
struct ScaledWeights {
    scale: u128,
    by_distance: Vec<u128>,
}

impl ScaledWeights {
    fn new(n: usize, cops: usize) -> Option<Self> {
        let binoms: Vec<BigUint> = (0..n)
            .map(|j| binomial(n as i64, j as i64).to_biguint().unwrap())
            .collect();
        let scale = binoms.iter().fold(BigUint::one(), |acc, b| acc.lcm(b));
        // Sums of up to `cops` weights must fit.
        if scale.bits() + (usize::BITS - cops.leading_zeros()) as u64 + 2 > 127 {
            return None;
        }
        let mut by_distance = vec![scale.to_u128()?; 2];
        for b in binoms.iter().take(n).skip(1) {
            by_distance.push((&scale / b).to_u128()?);
        }
        Some(ScaledWeights {
            scale: scale.to_u128()?,
            by_distance,
        })
    }

    /// Scaled potential of `v`, or `None` once it exceeds `cap`.
    fn sum(&self, cops: &[usize], v: usize, cap: u128) -> Option<u128> {
        let mut s = 0u128;
        for &c in cops {
            s += self.by_distance[(c ^ v).count_ones() as usize];
            if s > cap {
                return None;
            }
        }
        Some(s)
    }
}

pub struct PotentialEvader {
    checks: bool,
    report: InvariantReport,
    n: usize,
    weights: Option<ScaledWeights>,
}

impl Default for PotentialEvader {
    fn default() -> Self {
        Self::new()
    }
}

impl PotentialEvader {
    pub fn new() -> Self {
        PotentialEvader {
            checks: true,
            report: InvariantReport::default(),
            n: 0,
            weights: None,
        }
    }

    fn exact(&self, cops: &[usize], v: usize) -> BigRational {
        cops.iter()
            .map(|&c| cop_weight(self.n, (c ^ v).count_ones() as usize))
            .sum()
    }

    /// Lowest-potential vertex of `candidates`, trying `prefer` first so it
    /// wins ties.
    fn best(
        &self,
        cops: &[usize],
        candidates: &[usize],
        prefer: Option<usize>,
    ) -> (usize, BigRational) {
        let order = prefer.into_iter().chain(candidates.iter().copied());
        match &self.weights {
            Some(w) => {
                let mut best: Option<(usize, u128)> = None;
                for v in order {
                    let cap = best.map_or(u128::MAX, |(_, s)| s);
                    if let Some(s) = w.sum(cops, v, cap) {
                        if best.is_none_or(|(_, b)| s < b) {
                            best = Some((v, s));
                        }
                    }
                }
                let (v, s) = best.expect("at least one candidate");
                (v, BigRational::new(BigInt::from(s), BigInt::from(w.scale)))
            }
            None => {
                let mut best: Option<(usize, BigRational)> = None;
                for v in order {
                    let p = self.exact(cops, v);
                    if best.as_ref().is_none_or(|(_, b)| p < *b) {
                        best = Some((v, p));
                    }
                }
                best.expect("at least one candidate")
            }
        }
    }

    fn record(&mut self, phi: &BigRational, notes: &mut Annotations) {
        note(notes, "phi", phi);
        if self.checks {
            self.report.bump("check.phi");
            if phi * BigRational::from_integer(BigInt::from(2)) >= BigRational::one() {
                self.report.bump("violation.phi");
                self.report.bump("fallback.phi-threshold");
                note(notes, "fallback", "phi-threshold");
            }
        }
    }
}

impl RobberStrategy for PotentialEvader {
    fn name(&self) -> String {
        "cube-potential".into()
    }

    fn prepare(&mut self, g: &GraphSpec, k: usize) -> Result<(), ConfigError> {
        if !g.is_hypercube() {
            return Err(ConfigError::new(format!(
                "cube-potential needs a hypercube, got {g}"
            )));
        }
        self.n = g.dimension();
        self.weights = ScaledWeights::new(self.n, k);
        self.report = InvariantReport::default();
        Ok(())
    }

    fn place(
        &mut self,
        g: &GraphSpec,
        cops: &[usize],
        notes: &mut Annotations,
    ) -> Result<Option<usize>, StrategyError> {
        let mask = blocked_mask(g, cops.iter().copied());
        let free: Vec<usize> = (0..g.vertex_count()).filter(|&v| !mask[v]).collect();
        if free.is_empty() {
            return Ok(None);
        }
        let (v, phi) = self.best(cops, &free, None);
        self.record(&phi, notes);
        Ok(Some(v))
    }

    fn step(&mut self, s: &GameState, notes: &mut Annotations) -> Result<usize, StrategyError> {
        let robber = s
            .robber
            .ok_or_else(|| StrategyError::new("robber not placed"))?;
        let reach = reachable_ids(&s.graph, &s.cops, robber)
            .map_err(|e| StrategyError::new(e.to_string()))?;
        let (v, phi) = self.best(&s.cops, &reach, Some(robber));
        self.record(&phi, notes);
        Ok(v)
    }

    fn set_checks(&mut self, on: bool) {
        self.checks = on;
    }

    fn report(&self) -> InvariantReport {
        self.report.clone()
    }
}
