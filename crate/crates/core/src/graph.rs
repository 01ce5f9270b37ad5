//! Regular graphs, stored either as explicit slot tables or implicitly as
//! abelian Cayley graphs.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::group::{GroupElement, GroupSpec};

/// Dense vertex id in `0..n`.
pub type Vertex = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Directed,
    Undirected,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Directed => "directed",
            Orientation::Undirected => "undirected",
        }
    }
}

#[derive(Clone, Debug)]
enum Storage {
    /// `slots[v * d + i]` is the endpoint of slot `i` at `v`.
    Explicit {
        slots: Vec<Vertex>,
        labels: Option<Vec<u32>>,
    },
    Cayley(GroupSpec),
}

/// An immutable `d`-regular graph on vertices `0..n`.
///
/// Neighbors are slots rather than sets, so multi-edges and self-loops are
/// representable; whether a graph is simple is a separate predicate.
#[derive(Clone, Debug)]
pub struct RegularGraph {
    n: usize,
    d: usize,
    orientation: Orientation,
    storage: Storage,
}

impl RegularGraph {
    /// Build from a flat slot table of length `n * d`.
    ///
    /// Undirected graphs must list each edge at both endpoints with matching
    /// multiplicity; this is verified here.
    pub fn from_slots(
        n: usize,
        d: usize,
        slots: Vec<Vertex>,
        orientation: Orientation,
    ) -> Result<Self> {
        if n.checked_mul(d) != Some(slots.len()) {
            return input(format!(
                "slot table has {} entries, expected n*d = {n}*{d}",
                slots.len()
            ));
        }
        if let Some(&bad) = slots.iter().find(|&&w| w >= n) {
            return input(format!("neighbor id {bad} out of range for n = {n}"));
        }
        let graph = Self {
            n,
            d,
            orientation,
            storage: Storage::Explicit {
                slots,
                labels: None,
            },
        };
        if orientation == Orientation::Undirected {
            graph.check_symmetric()?;
        }
        Ok(graph)
    }

    /// Build from per-vertex neighbor lists.
    pub fn from_lists(lists: &[Vec<Vertex>], orientation: Orientation) -> Result<Self> {
        let n = lists.len();
        let d = lists.first().map_or(0, Vec::len);
        if let Some((v, l)) = lists.iter().enumerate().find(|(_, l)| l.len() != d) {
            return input(format!(
                "vertex {v} has {} neighbor slots, expected {d}",
                l.len()
            ));
        }
        Self::from_slots(n, d, lists.concat(), orientation)
    }

    /// Attach per-slot labels (same shape as the slot table).
    pub fn with_labels(mut self, new_labels: Vec<u32>) -> Result<Self> {
        match &mut self.storage {
            Storage::Explicit { slots, labels } => {
                if new_labels.len() != slots.len() {
                    return input(format!(
                        "label table has {} entries, slot table has {}",
                        new_labels.len(),
                        slots.len()
                    ));
                }
                *labels = Some(new_labels);
                Ok(self)
            }
            Storage::Cayley(_) => input("Cayley graphs carry generator labels implicitly"),
        }
    }

    /// Implicit Cayley graph; vertex ids are the mixed-radix encoding of
    /// group elements (see [`GroupSpec::encode`]).
    pub fn cayley(spec: GroupSpec) -> Result<Self> {
        let n = spec
            .order()
            .and_then(|o| usize::try_from(o).ok())
            .ok_or_else(|| {
                crate::Error::Input(format!(
                    "group of order {} does not fit dense vertex ids",
                    spec.order_big()
                ))
            })?;
        let orientation = if spec.is_symmetric() {
            Orientation::Undirected
        } else {
            Orientation::Directed
        };
        Ok(Self {
            n,
            d: spec.degree(),
            orientation,
            storage: Storage::Cayley(spec),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_undirected(&self) -> bool {
        self.orientation == Orientation::Undirected
    }

    pub fn group_spec(&self) -> Option<&GroupSpec> {
        match &self.storage {
            Storage::Cayley(spec) => Some(spec),
            Storage::Explicit { .. } => None,
        }
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.storage, Storage::Explicit { .. })
    }

    /// Endpoint of slot `slot` at `v`. Panics on out-of-range arguments.
    pub fn neighbor(&self, v: Vertex, slot: usize) -> Vertex {
        assert!(v < self.n && slot < self.d, "slot ({v}, {slot}) out of range");
        match &self.storage {
            Storage::Explicit { slots, .. } => slots[v * self.d + slot],
            Storage::Cayley(spec) => {
                let g = spec.decode(v as u64);
                let h = spec.add(&g, &spec.generators()[slot]);
                spec.encode(&h).expect("order fits usize") as Vertex
            }
        }
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.d).map(move |i| self.neighbor(v, i))
    }

    /// Label of slot `slot` at `v`: the generator index for Cayley graphs.
    pub fn label(&self, v: Vertex, slot: usize) -> Option<u32> {
        match &self.storage {
            Storage::Explicit { labels, .. } => labels.as_ref().map(|l| l[v * self.d + slot]),
            Storage::Cayley(_) => Some(slot as u32),
        }
    }

    pub fn has_labels(&self) -> bool {
        match &self.storage {
            Storage::Explicit { labels, .. } => labels.is_some(),
            Storage::Cayley(_) => true,
        }
    }

    /// Whether some slot at `u` leads to `v`.
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        match &self.storage {
            Storage::Explicit { slots, .. } => slots[u * self.d..(u + 1) * self.d].contains(&v),
            Storage::Cayley(spec) => {
                let diff = spec.sub(&spec.decode(v as u64), &spec.decode(u as u64));
                spec.generator_index(&diff).is_some()
            }
        }
    }

    /// No self-loops and no repeated neighbor at any vertex.
    pub fn is_simple(&self) -> bool {
        let mut seen = Vec::with_capacity(self.d);
        (0..self.n).all(|v| {
            seen.clear();
            seen.extend(self.neighbors(v));
            seen.sort_unstable();
            seen.iter().all(|&w| w != v) && seen.windows(2).all(|p| p[0] != p[1])
        })
    }

    /// Explicit copy of the graph; Cayley graphs get generator-index labels.
    pub fn materialize(&self) -> RegularGraph {
        match &self.storage {
            Storage::Explicit { .. } => self.clone(),
            Storage::Cayley(_) => {
                let mut slots = Vec::with_capacity(self.n * self.d);
                let mut labels = Vec::with_capacity(self.n * self.d);
                for v in 0..self.n {
                    for i in 0..self.d {
                        slots.push(self.neighbor(v, i));
                        labels.push(i as u32);
                    }
                }
                RegularGraph {
                    n: self.n,
                    d: self.d,
                    orientation: self.orientation,
                    storage: Storage::Explicit {
                        slots,
                        labels: Some(labels),
                    },
                }
            }
        }
    }

    /// Group element for a vertex of a Cayley graph.
    pub fn element(&self, v: Vertex) -> Option<GroupElement> {
        self.group_spec().map(|s| s.decode(v as u64))
    }

    /// Edge multiset checks on every vertex: exactly `d` slots per vertex and,
    /// for undirected graphs, matching multiplicities in both directions.
    pub fn validate(&self) -> Result<()> {
        if let Storage::Explicit { slots, labels } = &self.storage {
            if slots.len() != self.n * self.d {
                return input("slot table has wrong length");
            }
            if let Some(l) = labels {
                if l.len() != slots.len() {
                    return input("label table has wrong length");
                }
            }
        }
        if self.orientation == Orientation::Undirected {
            self.check_symmetric()?;
        }
        Ok(())
    }

    fn check_symmetric(&self) -> Result<()> {
        let mut counts: HashMap<(Vertex, Vertex), i64> = HashMap::new();
        for u in 0..self.n {
            for w in self.neighbors(u) {
                if u != w {
                    *counts.entry((u, w)).or_default() += 1;
                    *counts.entry((w, u)).or_default() -= 1;
                }
            }
        }
        if let Some((&(u, w), _)) = counts.iter().find(|(_, &c)| c != 0) {
            return input(format!(
                "undirected graph lists edge {u}-{w} with mismatched multiplicity"
            ));
        }
        Ok(())
    }

    /// Dense slot table, if explicit.
    pub fn slots(&self) -> Option<&[Vertex]> {
        match &self.storage {
            Storage::Explicit { slots, .. } => Some(slots),
            Storage::Cayley(_) => None,
        }
    }

    /// Dense label table, if present.
    pub fn labels(&self) -> Option<Vec<u32>> {
        match &self.storage {
            Storage::Explicit { labels, .. } => labels.clone(),
            Storage::Cayley(_) => Some(
                (0..self.n)
                    .flat_map(|_| 0..self.d as u32)
                    .collect(),
            ),
        }
    }
}
