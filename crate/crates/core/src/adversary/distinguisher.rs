//! The test that separates genuine walks from cheap imitations: a walk never
//! crosses a non-edge, and on an expander a long stretch of it almost never
//! stays close to its starting point.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::graph::{RegularGraph, Vertex};

use super::AttackConfig;

/// Distance from the first to the last entry in the graph formed by the
/// consecutive determined pairs; `None` stands for infinity.
pub fn path_length(seq: &[Option<Vertex>]) -> Option<usize> {
    let first = (*seq.first()?)?;
    let last = (*seq.last()?)?;
    if first == last {
        return Some(0);
    }
    let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for w in seq.windows(2) {
        if let (Some(a), Some(b)) = (w[0], w[1]) {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
    }
    let mut dist = HashMap::from([(first, 0usize)]);
    let mut queue = VecDeque::from([first]);
    while let Some(x) = queue.pop_front() {
        let dx = dist[&x];
        for &y in adj.get(&x).into_iter().flatten() {
            if !dist.contains_key(&y) {
                if y == last {
                    return Some(dx + 1);
                }
                dist.insert(y, dx + 1);
                queue.push_back(y);
            }
        }
    }
    None
}

/// Which clause fired, with the witnessing times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum Witness {
    NonEdge { t: u64 },
    ShortSegment { i: u64, j: u64, path_length: usize },
}

/// Minimum segment length (exclusive) for the short-segment clause.
pub fn segment_threshold(n: usize, config: &AttackConfig) -> f64 {
    config.seg_len_const * config.log(n as f64)
}

/// Evaluates the distinguisher on `responses` (time to vertex). Edges are
/// checked against `graph`, following slot direction on directed graphs.
pub fn distinguisher(graph: &RegularGraph, responses: &BTreeMap<u64, Vertex>, config: &AttackConfig) -> Option<Witness> {
    for (&t, &v) in responses {
        if let Some(&w) = responses.get(&(t + 1)) {
            if !graph.has_edge(v, w) {
                return Some(Witness::NonEdge { t });
            }
        }
    }
    short_segment(graph.n(), responses, config)
}

/// Convenience wrapper returning the 0/1 verdict.
pub fn verdict(graph: &RegularGraph, responses: &BTreeMap<u64, Vertex>, config: &AttackConfig) -> bool {
    distinguisher(graph, responses, config).is_some()
}

fn short_segment(n: usize, responses: &BTreeMap<u64, Vertex>, config: &AttackConfig) -> Option<Witness> {
    let threshold = segment_threshold(n, config);
    let entries: Vec<(u64, Vertex)> = responses.iter().map(|(&t, &v)| (t, v)).collect();
    let last_time = entries.last()?.0;
    for (i, &(ti, vi)) in entries.iter().enumerate() {
        if ((last_time - ti) as f64) <= threshold {
            break;
        }
        // distances from v_i, relaxed as induced edges appear left to right
        let mut dist: HashMap<Vertex, usize> = HashMap::from([(vi, 0)]);
        let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
        for j in i + 1..entries.len() {
            let (tj, vj) = entries[j];
            let (tp, vp) = entries[j - 1];
            if tj == tp + 1 {
                adj.entry(vp).or_default().push(vj);
                adj.entry(vj).or_default().push(vp);
                relax(&mut dist, &adj, vp, vj);
                relax(&mut dist, &adj, vj, vp);
            }
            let span = tj - ti;
            if (span as f64) > threshold {
                if let Some(&pl) = dist.get(&vj) {
                    if (pl as f64) < span as f64 * config.shortness_ratio {
                        return Some(Witness::ShortSegment { i: ti, j: tj, path_length: pl });
                    }
                }
            }
        }
    }
    None
}

/// After adding edge `a - b`, propagate any improvement through `b`.
fn relax(dist: &mut HashMap<Vertex, usize>, adj: &HashMap<Vertex, Vec<Vertex>>, a: Vertex, b: Vertex) {
    let Some(&da) = dist.get(&a) else { return };
    if dist.get(&b).is_some_and(|&db| db <= da + 1) {
        return;
    }
    dist.insert(b, da + 1);
    let mut queue = VecDeque::from([b]);
    while let Some(x) = queue.pop_front() {
        let dx = dist[&x];
        for &y in adj.get(&x).into_iter().flatten() {
            if dist.get(&y).is_none_or(|&dy| dy > dx + 1) {
                dist.insert(y, dx + 1);
                queue.push_back(y);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::gen_cycle;
    use proptest::prelude::*;

    #[test]
    fn path_length_examples() {
        assert_eq!(path_length(&[Some(7)]), Some(0));
        assert_eq!(path_length(&[Some(0), Some(1), Some(0), Some(1), Some(2)]), Some(2));
        assert_eq!(path_length(&[Some(0), None, Some(1)]), None);
        assert_eq!(path_length(&[None, Some(1)]), None);
    }

    fn cfg(seg: f64) -> AttackConfig {
        AttackConfig {
            seg_len_const: seg,
            ..AttackConfig::default()
        }
    }

    #[test]
    fn clause_examples() {
        let c8 = gen_cycle(8).unwrap();
        let c = AttackConfig::default();
        assert!(!verdict(&c8, &BTreeMap::new(), &c));
        let jump = BTreeMap::from([(3, 0), (4, 4)]);
        assert_eq!(distinguisher(&c8, &jump, &c), Some(Witness::NonEdge { t: 3 }));
        // 0,1,0,1,... for 40 steps: threshold 1 * log2(8) = 3
        let zigzag: BTreeMap<u64, Vertex> = (0..40).map(|t| (t, (t % 2) as usize)).collect();
        assert!(matches!(distinguisher(&c8, &zigzag, &cfg(1.0)), Some(Witness::ShortSegment { .. })));
        assert!(!verdict(&c8, &zigzag, &c));
        // circling the cycle repeatedly stays within distance 4
        let straight: BTreeMap<u64, Vertex> = (0..40).map(|t| (t, (t % 8) as usize)).collect();
        assert!(matches!(distinguisher(&c8, &straight, &cfg(1.0)), Some(Witness::ShortSegment { .. })));
        let straight: BTreeMap<u64, Vertex> = (0..8).map(|t| (t, t as usize)).collect();
        assert!(!verdict(&c8, &straight, &cfg(1.0)));
    }

    #[test]
    fn endpoints_alone_suffice() {
        let c8 = gen_cycle(8).unwrap();
        // equal endpoints far apart in time: PL = 0
        let r = BTreeMap::from([(0, 5), (100, 5)]);
        assert!(verdict(&c8, &r, &cfg(1.0)));
    }

    proptest! {
        // Adding determined positions of the same walk never turns F off.
        #[test]
        fn monotone_in_revealed_positions(
            steps in prop::collection::vec(0usize..2, 60),
            keep in prop::collection::vec(any::<bool>(), 60),
            extra in prop::collection::vec(any::<bool>(), 60),
        ) {
            let c8 = gen_cycle(8).unwrap();
            let mut walk = vec![0usize];
            for s in &steps {
                let v = *walk.last().unwrap();
                walk.push(c8.neighbor(v, *s));
            }
            let c = cfg(1.0);
            let small: BTreeMap<u64, Vertex> = (0..60).filter(|&i| keep[i]).map(|i| (i as u64, walk[i])).collect();
            let big: BTreeMap<u64, Vertex> = (0..60).filter(|&i| keep[i] || extra[i]).map(|i| (i as u64, walk[i])).collect();
            if verdict(&c8, &small, &c) {
                prop_assert!(verdict(&c8, &big, &c));
            }
        }
    }
}
