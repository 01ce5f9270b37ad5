//! Graph families: configuration-model random regular graphs (optionally
//! containing a prescribed edge set), cycles, hypercubes, abelian Cayley
//! graphs, certified random Cayley expanders, and graph products.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{infeasible, input, Error, Result};
use crate::graph::{Orientation, RegularGraph, Vertex};
use crate::group::{GroupElement, GroupSpec};
use crate::rng::WalkRng;
use crate::stats::spectral::cayley_lambda;

/// Default cap on rejected matchings before giving up.
pub const DEFAULT_MAX_ATTEMPTS: u64 = 1_000_000;
/// Default number of generator sets tried by [`gen_alon_roichman`].
pub const AR_RETRY_BUDGET: u32 = 64;
/// Spectral bound certified by [`gen_alon_roichman`].
pub const AR_LAMBDA: f64 = 2.0 / 3.0;

/// A generated graph plus how much rejection it took.
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: RegularGraph,
    /// Matchings rejected before the accepted one.
    pub rejections: u64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifiedExpander {
    #[serde(skip)]
    pub graph: RegularGraph,
    /// Exact second-largest absolute eigenvalue of the walk matrix.
    pub lambda: f64,
    pub attempts: u32,
}

fn norm(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    (u.min(v), u.max(v))
}

/// Pair up half-edges uniformly at random; `None` if the result is not
/// simple or collides with `forced`.
fn try_matching(
    stubs: &mut [Vertex],
    forced: &HashSet<(Vertex, Vertex)>,
    rng: &mut WalkRng,
) -> Option<Vec<(Vertex, Vertex)>> {
    stubs.shuffle(rng);
    let mut seen: HashSet<(Vertex, Vertex)> = HashSet::with_capacity(stubs.len() / 2);
    let mut edges = Vec::with_capacity(stubs.len() / 2);
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        let e = norm(u, v);
        if u == v || forced.contains(&e) || !seen.insert(e) {
            return None;
        }
        edges.push(e);
    }
    Some(edges)
}

fn lists_from_edges(n: usize, edges: impl Iterator<Item = (Vertex, Vertex)>) -> Vec<Vec<Vertex>> {
    let mut lists = vec![Vec::new(); n];
    for (u, v) in edges {
        lists[u].push(v);
        lists[v].push(u);
    }
    for l in &mut lists {
        l.sort_unstable();
    }
    lists
}

/// Uniform simple `d`-regular graph on `n` vertices.
pub fn gen_random_regular(n: usize, d: usize, rng: &mut WalkRng) -> Result<Generated> {
    gen_conditioned_regular(n, d, &[], rng)
}

/// Uniform simple `d`-regular graph on `n` vertices containing every edge
/// of `forced`.
pub fn gen_conditioned_regular(
    n: usize,
    d: usize,
    forced: &[(Vertex, Vertex)],
    rng: &mut WalkRng,
) -> Result<Generated> {
    gen_conditioned_regular_capped(n, d, forced, DEFAULT_MAX_ATTEMPTS, rng)
}

pub fn gen_conditioned_regular_capped(
    n: usize,
    d: usize,
    forced: &[(Vertex, Vertex)],
    max_attempts: u64,
    rng: &mut WalkRng,
) -> Result<Generated> {
    if (n * d) % 2 == 1 {
        return infeasible(format!("n*d = {} is odd", n * d));
    }
    if d >= n {
        return input(format!("degree {d} must be below n = {n}"));
    }
    let mut forced_set = HashSet::new();
    let mut deg = vec![0usize; n];
    for &(u, v) in forced {
        if u >= n || v >= n {
            return input(format!("forced edge ({u}, {v}) out of range"));
        }
        if u == v {
            return infeasible(format!("forced edge ({u}, {u}) is a self-loop"));
        }
        if !forced_set.insert(norm(u, v)) {
            return infeasible(format!("forced edge ({u}, {v}) listed twice"));
        }
        deg[u] += 1;
        deg[v] += 1;
    }
    if let Some(v) = (0..n).find(|&v| deg[v] > d) {
        return infeasible(format!("forced edges give vertex {v} degree {}", deg[v]));
    }
    let mut warnings = Vec::new();
    if (forced_set.len() as f64) > (n as f64).sqrt() {
        warnings.push(format!(
            "{} forced edges exceed sqrt(n); acceptance may be slow",
            forced_set.len()
        ));
    }
    let mut stubs: Vec<Vertex> = (0..n)
        .flat_map(|v| std::iter::repeat_n(v, d - deg[v]))
        .collect();
    for attempt in 0..max_attempts {
        if let Some(edges) = try_matching(&mut stubs, &forced_set, rng) {
            let lists = lists_from_edges(n, edges.into_iter().chain(forced_set.iter().copied()));
            let graph = RegularGraph::from_lists(&lists, Orientation::Undirected)?;
            return Ok(Generated {
                graph,
                rejections: attempt,
                warnings,
            });
        }
    }
    Err(Error::GenerationFailed(format!(
        "no simple matching after {max_attempts} attempts (n = {n}, d = {d}, |S| = {})",
        forced_set.len()
    )))
}

/// One configuration-model matching, reporting whether it was simple.
pub fn matching_is_simple(n: usize, d: usize, rng: &mut WalkRng) -> bool {
    let mut stubs: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    try_matching(&mut stubs, &HashSet::new(), rng).is_some()
}

/// The `n`-cycle as the Cayley graph of `Z_n` with generators `(+1, -1)`.
pub fn gen_cycle(n: usize) -> Result<RegularGraph> {
    if n < 3 {
        return input(format!("a cycle needs at least 3 vertices, got {n}"));
    }
    RegularGraph::cayley(GroupSpec::cyclic(n as u64, &[1, n as u64 - 1])?)
}

/// The hypercube `(Z_2)^dim`; slot `i` flips bit `i`.
pub fn gen_hypercube(dim: usize) -> Result<RegularGraph> {
    if dim == 0 {
        return input("hypercube dimension must be at least 1");
    }
    if dim >= usize::BITS as usize - 1 {
        return input(format!("hypercube dimension {dim} too large"));
    }
    let gens = (0..dim)
        .map(|i| {
            let mut e = vec![0; dim];
            e[i] = 1;
            GroupElement(e)
        })
        .collect();
    RegularGraph::cayley(GroupSpec::new(vec![2; dim], gens)?)
}

pub fn gen_abelian_cayley(spec: GroupSpec) -> Result<RegularGraph> {
    RegularGraph::cayley(spec)
}

/// Random Cayley graph on `(Z_2)^m` with `multiplier * m` uniformly drawn
/// generators, redrawn until its exact spectral bound is at most 2/3.
pub fn gen_alon_roichman(m: usize, multiplier: usize, rng: &mut WalkRng) -> Result<CertifiedExpander> {
    gen_alon_roichman_with_budget(m, multiplier, AR_RETRY_BUDGET, rng)
}

pub fn gen_alon_roichman_with_budget(
    m: usize,
    multiplier: usize,
    budget: u32,
    rng: &mut WalkRng,
) -> Result<CertifiedExpander> {
    if m == 0 || multiplier == 0 {
        return input("m and multiplier must be positive");
    }
    if m > 24 {
        return input(format!("m = {m} exceeds the certification limit of 24"));
    }
    let mut best = f64::INFINITY;
    for attempt in 1..=budget {
        let gens: Vec<GroupElement> = (0..m * multiplier)
            .map(|_| GroupElement((0..m).map(|_| rng.random_range(0..2u64)).collect()))
            .collect();
        let spec = GroupSpec::new(vec![2; m], gens)?;
        let lambda = cayley_lambda(&spec)?;
        best = best.min(lambda);
        if lambda <= AR_LAMBDA + 1e-12 {
            return Ok(CertifiedExpander {
                graph: RegularGraph::cayley(spec)?,
                lambda,
                attempts: attempt,
            });
        }
    }
    Err(Error::GenerationFailed(format!(
        "no generator set with lambda <= 2/3 in {budget} attempts (m = {m}, multiplier = {multiplier}, best = {best:.4})"
    )))
}

/// Vertex id of the pair `(a, b)` in a product with `n2` vertices in the second factor.
pub fn pair_id(a: Vertex, b: Vertex, n2: usize) -> Vertex {
    a * n2 + b
}

pub fn split_pair(id: Vertex, n2: usize) -> (Vertex, Vertex) {
    (id / n2, id % n2)
}

fn product_orientation(g1: &RegularGraph, g2: &RegularGraph) -> Orientation {
    if g1.is_undirected() && g2.is_undirected() {
        Orientation::Undirected
    } else {
        Orientation::Directed
    }
}

/// Tensor product: `(a, b) ~ (a', b')` iff `a ~ a'` and `b ~ b'`. Slot
/// `i * d2 + j` moves by slot `i` in the first factor and `j` in the second.
pub fn tensor_product(g1: &RegularGraph, g2: &RegularGraph) -> Result<RegularGraph> {
    let (n1, n2, d1, d2) = (g1.n(), g2.n(), g1.d(), g2.d());
    let mut slots = Vec::with_capacity(n1 * n2 * d1 * d2);
    for a in 0..n1 {
        for b in 0..n2 {
            for i in 0..d1 {
                for j in 0..d2 {
                    slots.push(pair_id(g1.neighbor(a, i), g2.neighbor(b, j), n2));
                }
            }
        }
    }
    RegularGraph::from_slots(n1 * n2, d1 * d2, slots, product_orientation(g1, g2))
}

/// Cartesian product: the first `d1` slots move in the first factor, the
/// remaining `d2` in the second.
pub fn cartesian_product(g1: &RegularGraph, g2: &RegularGraph) -> Result<RegularGraph> {
    let (n1, n2, d1, d2) = (g1.n(), g2.n(), g1.d(), g2.d());
    let mut slots = Vec::with_capacity(n1 * n2 * (d1 + d2));
    for a in 0..n1 {
        for b in 0..n2 {
            for i in 0..d1 {
                slots.push(pair_id(g1.neighbor(a, i), b, n2));
            }
            for j in 0..d2 {
                slots.push(pair_id(a, g2.neighbor(b, j), n2));
            }
        }
    }
    RegularGraph::from_slots(n1 * n2, d1 + d2, slots, product_orientation(g1, g2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::*;

    fn sorted_lists(g: &RegularGraph) -> Vec<Vec<Vertex>> {
        (0..g.n())
            .map(|v| {
                let mut l: Vec<_> = g.neighbors(v).collect();
                l.sort_unstable();
                l
            })
            .collect()
    }

    #[test]
    fn k4_is_the_only_cubic_graph_on_four_vertices() {
        let g = gen_random_regular(4, 3, &mut stream(1, 0)).unwrap().graph;
        assert_eq!(
            sorted_lists(&g),
            vec![vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]]
        );
        let c = gen_conditioned_regular(4, 3, &[(0, 1)], &mut stream(1, 1)).unwrap();
        assert_eq!(sorted_lists(&c.graph), sorted_lists(&g));
    }

    #[test]
    fn parameter_errors() {
        let mut rng = stream(2, 0);
        assert!(matches!(gen_random_regular(3, 3, &mut rng), Err(Error::Infeasible(_))));
        assert!(matches!(gen_random_regular(4, 4, &mut rng), Err(Error::Input(_))));
        assert!(matches!(
            gen_conditioned_regular(6, 3, &[(2, 2)], &mut rng),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            gen_conditioned_regular(6, 2, &[(0, 1), (0, 2), (0, 3)], &mut rng),
            Err(Error::Infeasible(_))
        ));
        assert!(gen_cycle(2).is_err());
        assert!(gen_hypercube(0).is_err());
    }

    #[test]
    fn cycle_and_hypercube_shapes() {
        let c5 = gen_cycle(5).unwrap();
        for v in 0..5 {
            assert_eq!(sorted_lists(&c5)[v], {
                let mut l = vec![(v + 1) % 5, (v + 4) % 5];
                l.sort_unstable();
                l
            });
        }
        let q1 = gen_hypercube(1).unwrap();
        assert_eq!((q1.n(), q1.d()), (2, 1));
        assert_eq!(q1.neighbor(0, 0), 1);
        let q3 = gen_hypercube(3).unwrap();
        assert_eq!((q3.n(), q3.d()), (8, 3));
        for v in 0..8 {
            for (i, w) in q3.neighbors(v).enumerate() {
                assert_eq!(w, v ^ (1 << i));
            }
        }
    }

    #[test]
    fn cayley_isomorphisms() {
        let z4 = gen_abelian_cayley(GroupSpec::cyclic(4, &[1, 3]).unwrap()).unwrap();
        assert_eq!(sorted_lists(&z4), sorted_lists(&gen_cycle(4).unwrap()));
        let dir = gen_abelian_cayley(GroupSpec::cyclic(5, &[1]).unwrap()).unwrap();
        assert_eq!(dir.orientation(), Orientation::Directed);
        assert_eq!(dir.d(), 1);
    }

    #[test]
    fn alon_roichman_is_certified() {
        let mut rng = stream(3, 0);
        let ar = gen_alon_roichman(3, 8, &mut rng).unwrap();
        assert_eq!(ar.graph.n(), 8);
        assert!(ar.lambda <= AR_LAMBDA);
        let tiny = gen_alon_roichman(1, 2, &mut rng).unwrap();
        // only {0, 1} works on Z_2 with two generators
        assert_eq!(tiny.lambda, 0.0);
        assert!(matches!(
            gen_alon_roichman_with_budget(4, 1, 3, &mut rng),
            Err(Error::GenerationFailed(_))
        ));
    }

    #[test]
    fn products_have_expected_degrees() {
        let c3 = gen_cycle(3).unwrap();
        let t = tensor_product(&c3, &c3).unwrap();
        let c = cartesian_product(&c3, &c3).unwrap();
        assert_eq!((t.n(), t.d(), c.n(), c.d()), (9, 4, 9, 4));
        assert!(t.validate().is_ok() && c.validate().is_ok());
        assert!(c.has_edge(pair_id(0, 0, 3), pair_id(1, 0, 3)));
        assert!(!c.has_edge(pair_id(0, 0, 3), pair_id(1, 1, 3)));
        assert!(t.has_edge(pair_id(0, 0, 3), pair_id(1, 1, 3)));
    }

    #[test]
    fn acceptance_rate_is_positive_at_moderate_size() {
        let mut rng = stream(4, 0);
        let ok = (0..200).filter(|_| matching_is_simple(200, 3, &mut rng)).count();
        assert!(ok > 5 && ok < 80, "{ok}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn generated_graphs_are_regular_and_simple(half_n in 3usize..40, d in 1usize..6, seed: u64) {
            let n = 2 * half_n;
            prop_assume!(d < n);
            let g = gen_random_regular(n, d, &mut stream(seed, 0)).unwrap().graph;
            prop_assert!(g.validate().is_ok());
            prop_assert!(g.is_simple());
            prop_assert_eq!(g.d(), d);
        }

        #[test]
        fn conditioning_keeps_forced_edges(seed: u64) {
            let forced = [(0, 1), (2, 3), (1, 5)];
            let g = gen_conditioned_regular(20, 3, &forced, &mut stream(seed, 0)).unwrap().graph;
            prop_assert!(g.is_simple());
            for (u, v) in forced {
                prop_assert!(g.has_edge(u, v));
            }
        }
    }
}
