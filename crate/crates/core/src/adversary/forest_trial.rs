//! Few probes on a large random regular graph rarely close a cycle or join
//! two explored regions.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::graph::{RegularGraph, Vertex};
use crate::probe::ProbeSession;
use crate::rng::WalkRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ForestTrial {
    pub probes: u64,
    pub events: usize,
    pub marked: usize,
}

/// `floor(sqrt(n) / 20)`.
pub fn forest_probe_count(n: usize) -> u64 {
    ((n as f64).sqrt() / 20.0).floor() as u64
}

/// Spends `probes` probes: every third is a fresh uniform vertex, the rest
/// step from a uniformly chosen explored vertex. Reports forest events.
pub fn forest_trial(graph: Arc<RegularGraph>, probes: u64, rng: WalkRng) -> Result<ForestTrial> {
    let mut session = ProbeSession::new(graph, rng);
    let mut explored: Vec<Vertex> = Vec::new();
    for i in 0..probes {
        if i % 3 == 0 || explored.is_empty() {
            explored.push(session.rand_vertex());
        } else {
            let from = explored[session.rng().random_range(0..explored.len())];
            let to = session.rand_neighbor(from)?;
            explored.push(to);
        }
    }
    Ok(ForestTrial {
        probes,
        events: session.forest().events().len(),
        marked: session.forest().marked_count(),
    })
}
