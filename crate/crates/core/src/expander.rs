//! Local access to random walks on undirected regular graphs with a known
//! spectral bound.
//!
//! Far from every determined time the walk is close to stationary, so a
//! uniform vertex is answered. Near exactly one determined time the walk is
//! simulated directly. Between two nearby determined times two families of
//! half-walks are grown until one from each side meets, and the pair is
//! stitched into a bridge.

use std::collections::{BTreeMap, HashMap};
use std::ops::Bound::{Excluded, Unbounded};

use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::graph::Vertex;
use crate::probe::{ProbeSession, ProbeStats};
use crate::walk::LocalWalk;

/// Times at or above this are rejected.
pub const MAX_TIME: u64 = 1 << 63;

/// Tunable constants; defaults follow the analysis with base-2 logarithms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpanderConfig {
    /// Distances up to `near_factor * k` count as near a determined time.
    pub near_factor: u64,
    /// Collision iterations allowed: `iteration_factor * sqrt(n) * log2(B / eps)`.
    pub iteration_factor: f64,
}

impl Default for ExpanderConfig {
    fn default() -> Self {
        Self {
            near_factor: 2,
            iteration_factor: 2.0,
        }
    }
}

/// Outcome of growing two families of half-walks toward each other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stitch {
    /// A genuine walk of `gap` steps from the left to the right end.
    Bridge(Vec<Vertex>),
    /// No collision within the iteration cap: a placeholder path that
    /// repeats a left half-walk's endpoint and then jumps to the right end.
    Fallback(Vec<Vertex>),
}

impl Stitch {
    pub fn path(&self) -> &[Vertex] {
        match self {
            Stitch::Bridge(p) | Stitch::Fallback(p) => p,
        }
    }

    pub fn is_fallback(&self) -> bool {
        matches!(self, Stitch::Fallback(_))
    }
}

fn walk(session: &mut ProbeSession, from: Vertex, steps: u64) -> Result<Vec<Vertex>> {
    let mut path = Vec::with_capacity(steps as usize + 1);
    path.push(from);
    let mut v = from;
    for _ in 0..steps {
        v = session.rand_neighbor(v)?;
        path.push(v);
    }
    Ok(path)
}

/// Samples a `gap`-step walk from `v_left` to `v_right` by collision of
/// half-walks of lengths `gap / 2` (left) and `gap - gap / 2` (right).
pub fn stitch_bridge(
    session: &mut ProbeSession,
    v_left: Vertex,
    v_right: Vertex,
    gap: u64,
    iteration_cap: u64,
) -> Result<Stitch> {
    if gap < 2 {
        return input(format!("bridge gap {gap} must be at least 2"));
    }
    if !session.graph().is_undirected() {
        return input("bridges need an undirected graph");
    }
    let a = gap / 2;
    let b = gap - a;
    let mut lefts: Vec<Vec<Vertex>> = Vec::new();
    let mut rights: Vec<Vec<Vertex>> = Vec::new();
    let mut left_ends: HashMap<Vertex, usize> = HashMap::new();
    let mut right_ends: HashMap<Vertex, usize> = HashMap::new();
    for _ in 0..iteration_cap.max(1) {
        let l = walk(session, v_left, a)?;
        let end = *l.last().expect("non-empty walk");
        if let Some(&j) = right_ends.get(&end) {
            return Ok(Stitch::Bridge(join(&l, &rights[j])));
        }
        left_ends.entry(end).or_insert(lefts.len());
        lefts.push(l);

        let r = walk(session, v_right, b)?;
        let end = *r.last().expect("non-empty walk");
        if let Some(&i) = left_ends.get(&end) {
            return Ok(Stitch::Bridge(join(&lefts[i], &r)));
        }
        right_ends.entry(end).or_insert(rights.len());
        rights.push(r);
    }
    let mut path = lefts.swap_remove(0);
    let end = *path.last().expect("non-empty walk");
    path.extend(std::iter::repeat_n(end, b as usize - 1));
    path.push(v_right);
    Ok(Stitch::Fallback(path))
}

fn join(left: &[Vertex], right: &[Vertex]) -> Vec<Vertex> {
    let mut path = left.to_vec();
    path.extend(right.iter().rev().skip(1));
    path
}

/// Smallest `k >= 1` with `lambda^k <= eps / (n^2 budget)`.
pub fn mixing_parameter(n: usize, lambda: f64, eps: f64, budget: u64) -> u64 {
    if lambda <= 0.0 {
        return 1;
    }
    let target = eps.ln() - 2.0 * (n as f64).ln() - (budget as f64).ln();
    if target >= 0.0 {
        return 1;
    }
    let ln_l = lambda.ln();
    let mut k = (target / ln_l).ceil().max(1.0) as u64;
    // guard the rounding of the quotient in both directions
    while k > 1 && (k - 1) as f64 * ln_l <= target {
        k -= 1;
    }
    while k as f64 * ln_l > target {
        k += 1;
    }
    k
}

/// How the queries of one walk were answered.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CaseCounts {
    /// Already determined: memoized answer, no probes.
    pub memo: u64,
    /// Far from everything: a uniform vertex.
    pub far: u64,
    /// Near the lower bracket only: walk forward.
    pub forward: u64,
    /// Near the upper bracket only: walk backward from it.
    pub backward: u64,
    /// Near both brackets: stitched bridge.
    pub bridge: u64,
}

/// Query state of one walk.
#[derive(Debug)]
pub struct ExpanderOracle {
    session: ProbeSession,
    lambda: f64,
    eps: f64,
    budget: u64,
    k: u64,
    config: ExpanderConfig,
    iteration_cap: u64,
    determined: BTreeMap<u64, Vertex>,
    fallback_brackets: Vec<(u64, u64)>,
    queries: u64,
    cases: CaseCounts,
}

impl ExpanderOracle {
    pub fn new(session: ProbeSession, lambda: f64, eps: f64, budget: u64, start: Vertex) -> Result<Self> {
        Self::with_config(session, lambda, eps, budget, start, ExpanderConfig::default())
    }

    pub fn with_config(
        mut session: ProbeSession,
        lambda: f64,
        eps: f64,
        budget: u64,
        start: Vertex,
        config: ExpanderConfig,
    ) -> Result<Self> {
        let g = session.graph();
        if !g.is_undirected() {
            return input("the expander oracle needs an undirected graph");
        }
        if !(0.0..1.0).contains(&lambda) {
            return input(format!("lambda must lie in [0, 1), got {lambda}"));
        }
        if !(eps > 0.0) {
            return input(format!("eps must be positive, got {eps}"));
        }
        if budget == 0 {
            return input("budget must be at least 1");
        }
        if start >= g.n() {
            return input(format!("start {start} out of range (n = {})", g.n()));
        }
        if config.near_factor == 0 || !(config.iteration_factor > 0.0) {
            return input("config constants must be positive");
        }
        let n = g.n();
        let k = mixing_parameter(n, lambda, eps, budget);
        let log = (budget as f64 / eps).log2().max(1.0);
        let iteration_cap = (config.iteration_factor * (n as f64).sqrt() * log).ceil() as u64;
        session.mark(start);
        Ok(Self {
            session,
            lambda,
            eps,
            budget,
            k,
            config,
            iteration_cap: iteration_cap.max(1),
            determined: BTreeMap::from([(0, start)]),
            fallback_brackets: Vec::new(),
            queries: 0,
            cases: CaseCounts::default(),
        })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    pub fn iteration_cap(&self) -> u64 {
        self.iteration_cap
    }

    pub fn determined(&self) -> &BTreeMap<u64, Vertex> {
        &self.determined
    }

    pub fn cases(&self) -> CaseCounts {
        self.cases
    }

    pub fn fallback_count(&self) -> u64 {
        self.fallback_brackets.len() as u64
    }

    /// Brackets `(t_-, t_+)` filled by a fallback path.
    pub fn fallback_brackets(&self) -> &[(u64, u64)] {
        &self.fallback_brackets
    }

    pub fn session(&self) -> &ProbeSession {
        &self.session
    }

    pub fn stats(&self) -> ProbeStats {
        self.session.stats()
    }

    /// Near threshold `near_factor * k`.
    pub fn near(&self) -> u64 {
        self.config.near_factor.saturating_mul(self.k)
    }

    /// Hard cap on probes spent by a single query.
    pub fn per_query_probe_cap(&self) -> u64 {
        let bracket = 2 * self.near();
        self.iteration_cap
            .saturating_mul(bracket)
            .saturating_add(self.near())
            .saturating_add(1)
    }

    /// Whether consecutive determined times are 1 apart or at least
    /// `near_factor * k` apart.
    pub fn gap_invariant_holds(&self) -> bool {
        let times: Vec<u64> = self.determined.keys().copied().collect();
        times.windows(2).all(|w| w[1] - w[0] == 1 || w[1] - w[0] >= self.near())
    }

    pub fn position(&mut self, t: u64) -> Result<Vertex> {
        if t >= MAX_TIME {
            return input(format!("time {t} is beyond the supported range"));
        }
        if self.queries >= self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        self.queries += 1;
        if let Some(&v) = self.determined.get(&t) {
            self.cases.memo += 1;
            return Ok(v);
        }
        let (t_minus, v_minus) = self
            .determined
            .range(..t)
            .next_back()
            .map(|(&a, &b)| (a, b))
            .expect("time 0 is always determined");
        let upper = self
            .determined
            .range((Excluded(t), Unbounded))
            .next()
            .map(|(&a, &b)| (a, b));
        let near = self.near();
        let l = t - t_minus;
        let left_near = l <= near;
        let right_near = matches!(upper, Some((tp, _)) if tp - t <= near);

        match (left_near, right_near, upper) {
            (false, false, _) => {
                self.cases.far += 1;
                let v = self.session.rand_vertex();
                self.determined.insert(t, v);
                Ok(v)
            }
            (true, false, _) => {
                self.cases.forward += 1;
                let path = walk(&mut self.session, v_minus, l)?;
                for (i, &v) in path.iter().enumerate().skip(1) {
                    self.determined.insert(t_minus + i as u64, v);
                }
                Ok(path[l as usize])
            }
            (false, true, Some((t_plus, v_plus))) => {
                // reversed walk from the upper bracket
                self.cases.backward += 1;
                let r = t_plus - t;
                let path = walk(&mut self.session, v_plus, r)?;
                for (i, &v) in path.iter().enumerate().skip(1) {
                    self.determined.insert(t_plus - i as u64, v);
                }
                Ok(path[r as usize])
            }
            (true, true, Some((t_plus, v_plus))) => {
                self.cases.bridge += 1;
                let gap = t_plus - t_minus;
                let stitch = stitch_bridge(&mut self.session, v_minus, v_plus, gap, self.iteration_cap)?;
                if stitch.is_fallback() {
                    self.fallback_brackets.push((t_minus, t_plus));
                }
                for (i, &v) in stitch.path().iter().enumerate().take(gap as usize).skip(1) {
                    self.determined.insert(t_minus + i as u64, v);
                }
                Ok(self.determined[&t])
            }
            (_, true, None) => unreachable!("right side is near only with an upper bracket"),
        }
    }
}

impl LocalWalk for ExpanderOracle {
    fn position(&mut self, t: u64) -> Result<Vertex> {
        ExpanderOracle::position(self, t)
    }

    fn num_vertices(&self) -> usize {
        self.session.graph().n()
    }
}
