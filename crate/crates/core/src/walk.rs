//! Common interface of all walk oracles.

use crate::error::Result;
use crate::graph::Vertex;

/// A single random walk answered one query at a time, in any order.
///
/// Positions are dense vertex ids of the walked graph; product oracles use
/// the product's id scheme.
pub trait LocalWalk {
    fn position(&mut self, t: u64) -> Result<Vertex>;

    /// Number of vertices of the walked graph.
    fn num_vertices(&self) -> usize;
}

impl<W: LocalWalk + ?Sized> LocalWalk for Box<W> {
    fn position(&mut self, t: u64) -> Result<Vertex> {
        (**self).position(t)
    }

    fn num_vertices(&self) -> usize {
        (**self).num_vertices()
    }
}
