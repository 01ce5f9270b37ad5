//! Walks on a tensor product: both coordinates move every step, so the
//! coordinates are independent walks queried at the same time.

use crate::error::Result;
use crate::gen::pair_id;
use crate::graph::Vertex;
use crate::walk::LocalWalk;

/// Build each component with tolerance `eps / 2` and the same budget.
#[derive(Debug)]
pub struct TensorOracle<A, B> {
    first: A,
    second: B,
}

impl<A: LocalWalk, B: LocalWalk> TensorOracle<A, B> {
    pub fn new(first: A, second: B) -> Self {
        Self { first, second }
    }

    pub fn pair(&mut self, t: u64) -> Result<(Vertex, Vertex)> {
        Ok((self.first.position(t)?, self.second.position(t)?))
    }

    pub fn components(&self) -> (&A, &B) {
        (&self.first, &self.second)
    }
}

impl<A: LocalWalk, B: LocalWalk> LocalWalk for TensorOracle<A, B> {
    fn position(&mut self, t: u64) -> Result<Vertex> {
        let (a, b) = self.pair(t)?;
        Ok(pair_id(a, b, self.second.num_vertices()))
    }

    fn num_vertices(&self) -> usize {
        self.first.num_vertices() * self.second.num_vertices()
    }
}
