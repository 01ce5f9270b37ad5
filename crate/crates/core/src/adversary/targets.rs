//! Algorithms the attacks can be pointed at.

use std::collections::HashMap;

use crate::error::{input, Result};
use crate::expander::ExpanderOracle;
use crate::forest::RevealedForest;
use crate::graph::Vertex;
use crate::probe::{ProbeSession, ProbeStats};
use crate::walk::LocalWalk;

/// A local-access algorithm under test. Targets that probe through a
/// [`ProbeSession`] expose its revealed forest as their transcript.
pub trait AttackTarget {
    fn position(&mut self, t: u64) -> Result<Vertex>;

    fn transcript(&self) -> Option<&RevealedForest>;

    fn stats(&self) -> ProbeStats;
}

/// Answers each new time with a fresh uniform vertex.
#[derive(Debug)]
pub struct UniformCheater {
    session: ProbeSession,
    answers: HashMap<u64, Vertex>,
}

impl UniformCheater {
    pub fn new(mut session: ProbeSession, start: Vertex) -> Self {
        session.mark(start);
        Self {
            session,
            answers: HashMap::from([(0, start)]),
        }
    }
}

impl AttackTarget for UniformCheater {
    fn position(&mut self, t: u64) -> Result<Vertex> {
        if let Some(&v) = self.answers.get(&t) {
            return Ok(v);
        }
        let v = self.session.rand_vertex();
        self.answers.insert(t, v);
        Ok(v)
    }

    fn transcript(&self) -> Option<&RevealedForest> {
        Some(self.session.forest())
    }

    fn stats(&self) -> ProbeStats {
        self.session.stats()
    }
}

/// Simulates the whole walk up to the largest time asked.
#[derive(Debug)]
pub struct HonestWalker {
    session: ProbeSession,
    path: Vec<Vertex>,
    max_time: u64,
}

impl HonestWalker {
    /// Times beyond `max_time` are refused rather than simulated.
    pub fn new(mut session: ProbeSession, start: Vertex, max_time: u64) -> Self {
        session.mark(start);
        Self {
            session,
            path: vec![start],
            max_time,
        }
    }
}

impl AttackTarget for HonestWalker {
    fn position(&mut self, t: u64) -> Result<Vertex> {
        if t > self.max_time {
            return input(format!("honest simulation limited to t <= {}", self.max_time));
        }
        while (self.path.len() as u64) <= t {
            let v = *self.path.last().expect("path starts non-empty");
            let w = self.session.rand_neighbor(v)?;
            self.path.push(w);
        }
        Ok(self.path[t as usize])
    }

    fn transcript(&self) -> Option<&RevealedForest> {
        Some(self.session.forest())
    }

    fn stats(&self) -> ProbeStats {
        self.session.stats()
    }
}

impl AttackTarget for ExpanderOracle {
    fn position(&mut self, t: u64) -> Result<Vertex> {
        ExpanderOracle::position(self, t)
    }

    fn transcript(&self) -> Option<&RevealedForest> {
        Some(self.session().forest())
    }

    fn stats(&self) -> ProbeStats {
        ExpanderOracle::stats(self)
    }
}

/// Any oracle without probe access, e.g. the abelian or dense oracles. Its
/// transcript is unavailable, so the attacks treat all distances between
/// distinct vertices as unknown.
#[derive(Debug)]
pub struct Opaque<W>(pub W);

impl<W: LocalWalk> AttackTarget for Opaque<W> {
    fn position(&mut self, t: u64) -> Result<Vertex> {
        self.0.position(t)
    }

    fn transcript(&self) -> Option<&RevealedForest> {
        None
    }

    fn stats(&self) -> ProbeStats {
        ProbeStats::default()
    }
}
