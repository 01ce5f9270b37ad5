//! The probe-access model: algorithms see the graph only through
//! `rand_neighbor` and `rand_vertex`, and every probe is counted.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{input, Result};
use crate::forest::RevealedForest;
use crate::graph::{RegularGraph, Vertex};
use crate::rng::WalkRng;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProbeStats {
    pub neighbor_probes: u64,
    pub vertex_probes: u64,
    pub revealed_edges: u64,
}

impl ProbeStats {
    pub fn total(&self) -> u64 {
        self.neighbor_probes + self.vertex_probes
    }
}

/// Single-writer probe access to a shared graph.
#[derive(Clone, Debug)]
pub struct ProbeSession {
    graph: Arc<RegularGraph>,
    rng: WalkRng,
    neighbor_probes: u64,
    vertex_probes: u64,
    forest: RevealedForest,
}

impl ProbeSession {
    pub fn new(graph: Arc<RegularGraph>, rng: WalkRng) -> Self {
        Self {
            graph,
            rng,
            neighbor_probes: 0,
            vertex_probes: 0,
            forest: RevealedForest::new(),
        }
    }

    pub fn graph(&self) -> &RegularGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<RegularGraph> {
        &self.graph
    }

    /// Uniform random slot of `v`. On directed graphs this follows an out-edge.
    pub fn rand_neighbor(&mut self, v: Vertex) -> Result<Vertex> {
        if v >= self.graph.n() {
            return input(format!("vertex {v} out of range (n = {})", self.graph.n()));
        }
        let slot = self.rng.random_range(0..self.graph.d());
        let w = self.graph.neighbor(v, slot);
        self.neighbor_probes += 1;
        self.forest.mark(v);
        self.forest.reveal(v, w);
        Ok(w)
    }

    pub fn rand_vertex(&mut self) -> Vertex {
        let v = self.rng.random_range(0..self.graph.n());
        self.vertex_probes += 1;
        self.forest.mark(v);
        v
    }

    /// Mark a vertex without probing (e.g. a walk's given start).
    pub fn mark(&mut self, v: Vertex) {
        self.forest.mark(v);
    }

    pub fn stats(&self) -> ProbeStats {
        ProbeStats {
            neighbor_probes: self.neighbor_probes,
            vertex_probes: self.vertex_probes,
            revealed_edges: self.forest.revealed_count() as u64,
        }
    }

    pub fn forest(&self) -> &RevealedForest {
        &self.forest
    }

    /// Randomness for the algorithm's own coin flips (not counted as probes).
    pub fn rng(&mut self) -> &mut WalkRng {
        &mut self.rng
    }
}
