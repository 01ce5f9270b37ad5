//! Walks on the k-th tensor or Cartesian power of a small base graph, built
//! as a binary tree of pairwise products over dense leaves.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cartesian::SplitTable;
use super::dense::DenseOracle;
use crate::error::{input, Error, Result};
use crate::graph::{RegularGraph, Vertex};
use crate::rng::{stream, WalkRng};
use crate::walk::LocalWalk;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerKind {
    Tensor,
    Cartesian,
}

#[derive(Debug)]
enum Node {
    Leaf(DenseOracle),
    Tensor(Box<Node>, Box<Node>),
    Cartesian {
        left: Box<Node>,
        right: Box<Node>,
        split: SplitTable,
        rng: WalkRng,
    },
}

impl Node {
    fn tuple(&mut self, t: u64, slice: f64, out: &mut Vec<Vertex>) -> Result<()> {
        match self {
            Node::Leaf(o) => out.push(o.position(t)?),
            Node::Tensor(l, r) => {
                l.tuple(t, slice, out)?;
                r.tuple(t, slice, out)?;
            }
            Node::Cartesian { left, right, split, rng } => {
                let s = split.split(t, slice, rng)?;
                left.tuple(s, slice, out)?;
                right.tuple(t - s, slice, out)?;
            }
        }
        Ok(())
    }

    fn depth(&self) -> usize {
        match self {
            Node::Leaf(_) => 0,
            Node::Tensor(l, r) | Node::Cartesian { left: l, right: r, .. } => 1 + l.depth().max(r.depth()),
        }
    }
}

/// `ceil(log2 k)`.
fn ceil_log2(k: u64) -> u32 {
    if k <= 1 {
        0
    } else {
        64 - (k - 1).leading_zeros()
    }
}

/// Per-query tolerance of every leaf and split draw: `eps / (B 4^ceil(log2 k))`.
pub fn leaf_tolerance(k: u64, eps: f64, budget: u64) -> f64 {
    eps / (budget as f64 * 4f64.powi(ceil_log2(k) as i32))
}

struct Builder<'a> {
    base: &'a Arc<RegularGraph>,
    cache: Arc<crate::stats::matrix::PowerCache>,
    kind: PowerKind,
    leaf_eps: f64,
    budget: u64,
    start: Vertex,
    seed: u64,
    next_stream: u64,
}

impl Builder<'_> {
    fn rng(&mut self) -> WalkRng {
        self.next_stream += 1;
        stream(self.seed, self.next_stream)
    }

    fn build(&mut self, copies: u64) -> Result<Node> {
        if copies == 1 {
            let rng = self.rng();
            return Ok(Node::Leaf(DenseOracle::new(
                self.base.clone(),
                self.cache.clone(),
                self.leaf_eps,
                self.budget,
                self.start,
                rng,
            )?));
        }
        let (a, b) = if copies % 2 == 0 {
            (copies / 2, copies / 2)
        } else {
            (copies - 1, 1)
        };
        let left = Box::new(self.build(a)?);
        let right = Box::new(self.build(b)?);
        Ok(match self.kind {
            PowerKind::Tensor => Node::Tensor(left, right),
            PowerKind::Cartesian => {
                let d = self.base.d();
                Node::Cartesian {
                    left,
                    right,
                    split: SplitTable::new(a as usize * d, b as usize * d)?,
                    rng: self.rng(),
                }
            }
        })
    }
}

/// Oracle for the walk on `base^k` from `(start, ..., start)`.
#[derive(Debug)]
pub struct PowerOracle {
    root: Node,
    kind: PowerKind,
    k: u64,
    base_n: usize,
    slice: f64,
    budget: u64,
    queries: u64,
}

impl PowerOracle {
    pub fn build(
        base: Arc<RegularGraph>,
        k: u64,
        kind: PowerKind,
        eps: f64,
        budget: u64,
        start: Vertex,
        seed: u64,
    ) -> Result<Self> {
        let cache = DenseOracle::shared_cache(&base)?;
        Self::build_with_cache(base, cache, k, kind, eps, budget, start, seed)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn build_with_cache(
        base: Arc<RegularGraph>,
        cache: Arc<crate::stats::matrix::PowerCache>,
        k: u64,
        kind: PowerKind,
        eps: f64,
        budget: u64,
        start: Vertex,
        seed: u64,
    ) -> Result<Self> {
        if k == 0 {
            return input("power k must be at least 1");
        }
        if k > 1 << 16 {
            return input("power k limited to 65536");
        }
        if !(eps > 0.0) || budget == 0 {
            return input("eps must be positive and budget at least 1");
        }
        let slice = leaf_tolerance(k, eps, budget);
        let mut builder = Builder {
            base: &base,
            cache,
            kind,
            // leaves are built with the whole-run tolerance slice * B
            leaf_eps: slice * budget as f64,
            budget,
            start,
            seed,
            next_stream: 0,
        };
        let root = builder.build(k)?;
        Ok(Self {
            root,
            kind,
            k,
            base_n: base.n(),
            slice,
            budget,
            queries: 0,
        })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn kind(&self) -> PowerKind {
        self.kind
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    /// Coordinates of the walk at time `t`, one per copy of the base graph.
    pub fn tuple(&mut self, t: u64) -> Result<Vec<Vertex>> {
        if self.queries >= self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        self.queries += 1;
        let mut out = Vec::with_capacity(self.k as usize);
        self.root.tuple(t, self.slice, &mut out)?;
        Ok(out)
    }
}

impl LocalWalk for PowerOracle {
    /// Big-endian base-`n` id of the tuple.
    fn position(&mut self, t: u64) -> Result<Vertex> {
        let n = self.base_n;
        self.tuple(t)?
            .iter()
            .try_fold(0usize, |acc, &v| acc.checked_mul(n).and_then(|x| x.checked_add(v)))
            .ok_or_else(|| Error::Input("power graph too large for dense vertex ids".into()))
    }

    fn num_vertices(&self) -> usize {
        u32::try_from(self.k)
            .ok()
            .and_then(|k| self.base_n.checked_pow(k))
            .unwrap_or(usize::MAX)
    }
}
