//! Base-case oracle for small explicit graphs: conditional laws are read off
//! powers of the transition matrix.

use std::collections::BTreeMap;
use std::ops::Bound::{Excluded, Unbounded};
use std::sync::Arc;

use rand::Rng;

use crate::error::{input, Error, Result};
use crate::graph::{RegularGraph, Vertex};
use crate::rng::WalkRng;
use crate::sampling::exact::draw_index;
use crate::stats::exact::{bridge_from_cache, Distribution, MAX_RATIONAL_N, MAX_RATIONAL_T};
use crate::stats::matrix::{walk_counts_from, walk_counts_to, PowerCache};
use crate::walk::LocalWalk;

/// Largest graph accepted by the dense oracle.
pub const MAX_DENSE_N: usize = 512;

#[derive(Debug)]
pub struct DenseOracle {
    graph: Arc<RegularGraph>,
    cache: Arc<PowerCache>,
    eps: f64,
    budget: u64,
    determined: BTreeMap<u64, Vertex>,
    queries: u64,
    exact_draws: u64,
    rng: WalkRng,
}

impl DenseOracle {
    /// Powers shared by every oracle on `g`.
    pub fn shared_cache(g: &RegularGraph) -> Result<Arc<PowerCache>> {
        if g.n() > MAX_DENSE_N {
            return input(format!("dense oracle limited to n <= {MAX_DENSE_N}"));
        }
        Ok(Arc::new(PowerCache::new(g)))
    }

    pub fn new(
        graph: Arc<RegularGraph>,
        cache: Arc<PowerCache>,
        eps: f64,
        budget: u64,
        start: Vertex,
        rng: WalkRng,
    ) -> Result<Self> {
        if graph.n() > MAX_DENSE_N || cache.n() != graph.n() {
            return input("power cache does not belong to this graph");
        }
        if start >= graph.n() {
            return input(format!("start {start} out of range (n = {})", graph.n()));
        }
        if !(eps > 0.0) {
            return input(format!("eps must be positive, got {eps}"));
        }
        if budget == 0 {
            return input("budget must be at least 1");
        }
        Ok(Self {
            graph,
            cache,
            eps,
            budget,
            determined: BTreeMap::from([(0, start)]),
            queries: 0,
            exact_draws: 0,
            rng,
        })
    }

    pub fn graph(&self) -> &RegularGraph {
        &self.graph
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    pub fn slice(&self) -> f64 {
        self.eps / self.budget as f64
    }

    pub fn determined(&self) -> &BTreeMap<u64, Vertex> {
        &self.determined
    }

    /// Draws answered with exact integer weights because floating point
    /// could not certify the tolerance.
    pub fn exact_draws(&self) -> u64 {
        self.exact_draws
    }

    /// Pins an extra time, e.g. to condition on a known endpoint. The pin
    /// is not checked for feasibility; an impossible pin surfaces as an
    /// infeasibility error on a later bracketed query.
    pub fn pin(&mut self, t: u64, v: Vertex) -> Result<()> {
        if v >= self.graph.n() {
            return input(format!("vertex {v} out of range"));
        }
        if self.determined.contains_key(&t) {
            return input(format!("time {t} already determined"));
        }
        self.determined.insert(t, v);
        Ok(())
    }

    pub fn position(&mut self, t: u64) -> Result<Vertex> {
        if self.queries >= self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        self.queries += 1;
        if let Some(&v) = self.determined.get(&t) {
            return Ok(v);
        }
        let (t_minus, v_minus) = self
            .determined
            .range(..t)
            .next_back()
            .map(|(&a, &b)| (a, b))
            .expect("time 0 is always determined");
        let upper = self.determined.range((Excluded(t), Unbounded)).next().map(|(&a, &b)| (a, b));
        let (l, m, v_plus) = match upper {
            Some((t_plus, v_plus)) => (t_plus - t_minus, t - t_minus, Some(v_plus)),
            None => (t - t_minus, t - t_minus, None),
        };
        let v = self.draw(v_minus, v_plus, l, m)?;
        self.determined.insert(t, v);
        Ok(v)
    }

    fn draw(&mut self, v_minus: Vertex, v_plus: Option<Vertex>, l: u64, m: u64) -> Result<Vertex> {
        let n = self.graph.n();
        let dist = match v_plus {
            Some(vp) => bridge_from_cache(&self.cache, v_minus, vp, l, m)?,
            None => {
                let (mass, error_bound) = self.cache.row_power(Distribution::point(n, v_minus).mass, m);
                Distribution { mass, error_bound }
            }
        };
        // the 53-bit uniform adds at most n ulps of cumulative error
        let err = dist.error_bound + 2.0 * n as f64 * f64::EPSILON;
        if err <= self.slice() {
            return Ok(inverse_cdf(&dist.mass, &mut self.rng));
        }
        if n <= MAX_RATIONAL_N && l <= MAX_RATIONAL_T {
            let left = walk_counts_from(&self.graph, v_minus, m);
            let weights = match v_plus {
                Some(vp) => {
                    let right = walk_counts_to(&self.graph, vp, l - m);
                    left.iter().zip(&right).map(|(a, b)| a * b).collect()
                }
                None => left,
            };
            if weights.iter().all(num_traits::Zero::is_zero) {
                return Err(Error::Infeasible(format!("no {l}-step walk between the brackets")));
            }
            self.exact_draws += 1;
            return Ok(draw_index(&weights, &mut self.rng));
        }
        Err(Error::PrecisionUnavailable {
            eps: self.slice(),
            reason: format!("floating-point error bound {err:e} at l = {l}, n = {n}"),
        })
    }
}

fn inverse_cdf(mass: &[f64], rng: &mut WalkRng) -> Vertex {
    let total: f64 = mass.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in mass.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

impl LocalWalk for DenseOracle {
    fn position(&mut self, t: u64) -> Result<Vertex> {
        DenseOracle::position(self, t)
    }

    fn num_vertices(&self) -> usize {
        self.graph.n()
    }
}
