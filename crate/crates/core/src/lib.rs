//! Local access to random walks on regular graphs.
//!
//! An oracle answers `position(t)` queries for a single random walk in any
//! order, probing the graph only through [`ProbeSession`], so that the joint
//! law of its answers stays close to that of a genuine walk.

pub mod abelian;
pub mod adversary;
pub mod bench;
pub mod cli;
pub mod error;
pub mod expander;
pub mod forest;
pub mod gen;
pub mod graph;
pub mod group;
pub mod io;
pub mod probe;
pub mod product;
pub mod rng;
pub mod sampling;
pub mod selftest;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
pub use forest::{ForestEvent, RevealedForest};
pub use graph::{Orientation, RegularGraph, Vertex};
pub use group::{GroupElement, GroupSpec};
pub use probe::{ProbeSession, ProbeStats};
pub use walk::LocalWalk;
