//! Walks on a Cartesian product: each step moves one coordinate, chosen with
//! probability proportional to the component degrees. The number of steps
//! spent on the first component is itself sampled locally.

use std::collections::BTreeMap;
use std::ops::Bound::{Excluded, Unbounded};

use crate::error::{input, Error, Result};
use crate::gen::pair_id;
use crate::graph::Vertex;
use crate::rng::WalkRng;
use crate::sampling::univariate::{binomial, hypergeometric};
use crate::sampling::SamplerMode;
use crate::walk::LocalWalk;

/// `s_t`, the number of first-component steps among the first `t`.
#[derive(Clone, Debug)]
pub struct SplitTable {
    d1: u64,
    d2: u64,
    table: BTreeMap<u64, u64>,
    mode: SamplerMode,
}

impl SplitTable {
    pub fn new(d1: usize, d2: usize) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return input("component degrees must be positive");
        }
        Ok(Self {
            d1: d1 as u64,
            d2: d2 as u64,
            table: BTreeMap::from([(0, 0)]),
            mode: SamplerMode::Certified,
        })
    }

    pub fn with_mode(mut self, mode: SamplerMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn entries(&self) -> &BTreeMap<u64, u64> {
        &self.table
    }

    /// `s_0 = 0`, non-decreasing, increments bounded by elapsed time.
    pub fn is_consistent(&self) -> bool {
        let e: Vec<(u64, u64)> = self.table.iter().map(|(&a, &b)| (a, b)).collect();
        e.first() == Some(&(0, 0)) && e.windows(2).all(|w| w[0].1 <= w[1].1 && w[1].1 - w[0].1 <= w[1].0 - w[0].0)
    }

    pub fn split(&mut self, t: u64, eps: f64, rng: &mut WalkRng) -> Result<u64> {
        if let Some(&s) = self.table.get(&t) {
            return Ok(s);
        }
        let (t_minus, s_minus) = self.table.range(..t).next_back().map(|(&a, &b)| (a, b)).expect("s_0 present");
        let upper = self.table.range((Excluded(t), Unbounded)).next().map(|(&a, &b)| (a, b));
        let s = match upper {
            None => s_minus + binomial(t - t_minus, self.d1, self.d1 + self.d2, eps, self.mode, rng)?,
            Some((t_plus, s_plus)) => {
                s_minus + hypergeometric(t - t_minus, s_plus - s_minus, t_plus - t_minus, eps, self.mode, rng)?
            }
        };
        self.table.insert(t, s);
        debug_assert!(self.is_consistent());
        Ok(s)
    }
}

/// Build each component with tolerance `eps / 3`; split draws use
/// `eps / (3 B)` each.
#[derive(Debug)]
pub struct CartesianOracle<A, B> {
    first: A,
    second: B,
    split: SplitTable,
    eps: f64,
    budget: u64,
    queries: u64,
    rng: WalkRng,
}

impl<A: LocalWalk, B: LocalWalk> CartesianOracle<A, B> {
    pub fn new(first: A, d1: usize, second: B, d2: usize, eps: f64, budget: u64, rng: WalkRng) -> Result<Self> {
        if !(eps > 0.0) {
            return input(format!("eps must be positive, got {eps}"));
        }
        if budget == 0 {
            return input("budget must be at least 1");
        }
        Ok(Self {
            first,
            second,
            split: SplitTable::new(d1, d2)?,
            eps,
            budget,
            queries: 0,
            rng,
        })
    }

    pub fn split_table(&self) -> &SplitTable {
        &self.split
    }

    pub fn pair(&mut self, t: u64) -> Result<(Vertex, Vertex)> {
        if self.queries >= self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        self.queries += 1;
        let slice = self.eps / (3.0 * self.budget as f64);
        let s = self.split.split(t, slice, &mut self.rng)?;
        Ok((self.first.position(s)?, self.second.position(t - s)?))
    }
}

impl<A: LocalWalk, B: LocalWalk> LocalWalk for CartesianOracle<A, B> {
    fn position(&mut self, t: u64) -> Result<Vertex> {
        let (a, b) = self.pair(t)?;
        Ok(pair_id(a, b, self.second.num_vertices()))
    }

    fn num_vertices(&self) -> usize {
        self.first.num_vertices() * self.second.num_vertices()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::*;

    #[test]
    fn degenerate_refinement_is_forced() {
        let mut table = SplitTable::new(2, 2).unwrap();
        table.table.insert(10, 10);
        let mut rng = stream(1, 0);
        assert_eq!(table.split(4, 1e-6, &mut rng).unwrap(), 4);
        table.table.insert(20, 10);
        assert_eq!(table.split(15, 1e-6, &mut rng).unwrap(), 10);
        assert_eq!(table.split(0, 1e-6, &mut rng).unwrap(), 0);
    }

    proptest! {
        #[test]
        fn split_invariants(times in prop::collection::vec(0u64..1_000_000, 1..20), d1 in 1usize..5, d2 in 1usize..5, seed: u64) {
            let mut table = SplitTable::new(d1, d2).unwrap();
            let mut rng = stream(seed, 0);
            for &t in &times {
                let s = table.split(t, 1e-6, &mut rng).unwrap();
                prop_assert!(s <= t);
                prop_assert!(table.is_consistent());
            }
        }
    }
}
