//! Incremental record of revealed edges: a union-find over touched vertices
//! plus the spanning forest used to answer distance queries.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::graph::Vertex;

/// Something noteworthy happened while revealing an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForestEvent {
    /// A new edge joined two vertices that were already in the same tree.
    CycleFound { u: Vertex, v: Vertex },
    /// A new edge joined two distinct trees that were both already marked.
    TreeMerge { u: Vertex, v: Vertex },
}

#[derive(Clone, Debug, Default)]
pub struct RevealedForest {
    parent: HashMap<Vertex, Vertex>,
    size: HashMap<Vertex, usize>,
    tree_adj: HashMap<Vertex, Vec<Vertex>>,
    revealed: HashSet<(Vertex, Vertex)>,
    marked: HashSet<Vertex>,
    events: Vec<ForestEvent>,
}

fn norm(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl RevealedForest {
    pub fn new() -> Self {
        Self::default()
    }

    /// Mark a vertex as touched; a fresh vertex becomes a singleton tree.
    pub fn mark(&mut self, v: Vertex) {
        if self.marked.insert(v) {
            self.parent.insert(v, v);
            self.size.insert(v, 1);
        }
    }

    pub fn is_marked(&self, v: Vertex) -> bool {
        self.marked.contains(&v)
    }

    fn find(&mut self, v: Vertex) -> Vertex {
        let mut root = v;
        while let Some(&p) = self.parent.get(&root) {
            if p == root {
                break;
            }
            root = p;
        }
        let mut cur = v;
        while cur != root {
            let next = self.parent[&cur];
            self.parent.insert(cur, root);
            cur = next;
        }
        root
    }

    fn root_of(&self, v: Vertex) -> Option<Vertex> {
        let mut root = *self.parent.get(&v)?;
        loop {
            let p = self.parent[&root];
            if p == root {
                return Some(root);
            }
            root = p;
        }
    }

    /// Record the edge `u -> v` returned by a neighbor probe from `u`.
    ///
    /// `u` is expected to be marked already (it was the probed vertex).
    /// Re-traversing a known edge changes nothing.
    pub fn reveal(&mut self, u: Vertex, v: Vertex) -> Option<ForestEvent> {
        self.mark(u);
        if !self.revealed.insert(norm(u, v)) {
            return None;
        }
        if u == v {
            let e = ForestEvent::CycleFound { u, v };
            self.events.push(e);
            return Some(e);
        }
        let was_marked = self.is_marked(v);
        self.mark(v);
        let (ru, rv) = (self.find(u), self.find(v));
        if ru == rv {
            let e = ForestEvent::CycleFound { u, v };
            self.events.push(e);
            return Some(e);
        }
        let (big, small) = if self.size[&ru] >= self.size[&rv] {
            (ru, rv)
        } else {
            (rv, ru)
        };
        self.parent.insert(small, big);
        let s = self.size[&small];
        *self.size.get_mut(&big).unwrap() += s;
        self.tree_adj.entry(u).or_default().push(v);
        self.tree_adj.entry(v).or_default().push(u);
        if was_marked {
            let e = ForestEvent::TreeMerge { u, v };
            self.events.push(e);
            Some(e)
        } else {
            None
        }
    }

    pub fn events(&self) -> &[ForestEvent] {
        &self.events
    }

    pub fn revealed_count(&self) -> usize {
        self.revealed.len()
    }

    pub fn marked_count(&self) -> usize {
        self.marked.len()
    }

    pub fn is_revealed(&self, u: Vertex, v: Vertex) -> bool {
        self.revealed.contains(&norm(u, v))
    }

    pub fn revealed_edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.revealed.iter().copied()
    }

    pub fn same_tree(&self, u: Vertex, v: Vertex) -> bool {
        match (self.root_of(u), self.root_of(v)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }

    /// Path between `u` and `v` along spanning-forest edges, endpoints included.
    pub fn known_path(&self, u: Vertex, v: Vertex) -> Option<Vec<Vertex>> {
        if u == v {
            return self.is_marked(u).then(|| vec![u]);
        }
        if !self.same_tree(u, v) {
            return None;
        }
        let mut prev: HashMap<Vertex, Vertex> = HashMap::new();
        prev.insert(u, u);
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &y in self.tree_adj.get(&x).into_iter().flatten() {
                if prev.contains_key(&y) {
                    continue;
                }
                prev.insert(y, x);
                if y == v {
                    let mut path = vec![v];
                    let mut cur = v;
                    while cur != u {
                        cur = prev[&cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(y);
            }
        }
        None
    }

    /// Length of [`known_path`](Self::known_path), or `None` for infinity.
    pub fn known_distance(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.known_path(u, v).map(|p| p.len() - 1)
    }

    /// Distances from `u` to every vertex of its tree.
    pub fn distances_from(&self, u: Vertex) -> HashMap<Vertex, usize> {
        let mut dist = HashMap::new();
        if !self.is_marked(u) {
            return dist;
        }
        dist.insert(u, 0);
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[&x];
            for &y in self.tree_adj.get(&x).into_iter().flatten() {
                if !dist.contains_key(&y) {
                    dist.insert(y, dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn simple_path_has_no_events() {
        let mut f = RevealedForest::new();
        f.mark(0);
        for i in 0..5 {
            assert_eq!(f.reveal(i, i + 1), None);
        }
        assert!(f.events().is_empty());
        assert_eq!(f.known_distance(0, 5), Some(5));
        assert_eq!(f.known_path(1, 3), Some(vec![1, 2, 3]));
    }

    #[test]
    fn triangle_closes_a_cycle() {
        let mut f = RevealedForest::new();
        f.reveal(0, 1);
        f.reveal(1, 2);
        assert_eq!(f.reveal(2, 0), Some(ForestEvent::CycleFound { u: 2, v: 0 }));
        // distances still come from the spanning tree
        assert_eq!(f.known_distance(0, 2), Some(2));
        assert_eq!(f.events().len(), 1);
    }

    #[test]
    fn retraversal_and_merge() {
        let mut f = RevealedForest::new();
        f.reveal(0, 1);
        assert_eq!(f.reveal(1, 0), None);
        f.mark(7);
        f.reveal(7, 8);
        assert_eq!(f.known_distance(0, 8), None);
        assert_eq!(f.reveal(1, 8), Some(ForestEvent::TreeMerge { u: 1, v: 8 }));
        assert_eq!(f.known_distance(0, 7), Some(3));
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let mut f = RevealedForest::new();
        assert!(matches!(f.reveal(3, 3), Some(ForestEvent::CycleFound { .. })));
    }

    proptest! {
        // Tree distances are symmetric and satisfy the triangle inequality,
        // and revealed endpoints are always marked.
        #[test]
        fn forest_metric(edges in prop::collection::vec((0usize..20, 0usize..20), 0..40)) {
            let mut f = RevealedForest::new();
            for &(u, v) in &edges {
                f.reveal(u, v);
            }
            for (u, v) in f.revealed_edges().collect::<Vec<_>>() {
                prop_assert!(f.is_marked(u) && f.is_marked(v));
            }
            for a in 0..20 {
                for b in 0..20 {
                    let ab = f.known_distance(a, b);
                    prop_assert_eq!(ab, f.known_distance(b, a));
                    for c in 0..20 {
                        if let (Some(x), Some(y), Some(z)) =
                            (ab, f.known_distance(b, c), f.known_distance(a, c)) {
                            prop_assert!(z <= x + y);
                        }
                    }
                }
            }
        }
    }
}
