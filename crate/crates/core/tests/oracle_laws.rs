//! Distributional and structural properties of the oracles, each against an
//! exact reference.

use std::sync::Arc;

use walk_oracle::abelian::AbelianOracle;
use walk_oracle::expander::ExpanderOracle;
use walk_oracle::gen::{gen_cycle, gen_random_regular};
use walk_oracle::rng::stream;
use walk_oracle::stats::{
    chi_square_gof, chi_square_two_sample, dense_counts, exact_joint, exact_lambda, exact_marginal, sample_joint,
};
use walk_oracle::{GroupElement, GroupSpec, ProbeSession};

#[test]
fn rand_neighbor_is_uniform_over_slots() {
    let z17 = GroupSpec::cyclic(17, &[1, 2, 3, 4, 13, 14, 15, 16]).unwrap();
    let graphs = [
        gen_random_regular(12, 3, &mut stream(12, 3)).unwrap().graph,
        walk_oracle::RegularGraph::cayley(z17).unwrap(),
    ];
    for g in graphs {
        let (g, d) = (Arc::new(g.materialize()), g.d());
        let mut s = ProbeSession::new(g.clone(), stream(1, 0));
        let v = 5;
        let slots: Vec<usize> = g.neighbors(v).collect();
        let mut counts = vec![0u64; d];
        for _ in 0..100_000 {
            let w = s.rand_neighbor(v).unwrap();
            counts[slots.iter().position(|&x| x == w).unwrap()] += 1;
        }
        let chi = chi_square_gof(&counts, &vec![1.0 / d as f64; d]).unwrap();
        assert!(chi.p_value > 0.01, "d = {d}: p = {}", chi.p_value);
    }
}

#[test]
fn abelian_marginals_on_c6() {
    let c6 = gen_cycle(6).unwrap();
    let spec = c6.group_spec().unwrap().clone();
    let samples = 100_000u64;
    for t in 1..=10u64 {
        let exact = exact_marginal(&c6, 0, t).unwrap().mass;
        let mut counts = [0u64; 6];
        for i in 0..samples {
            let mut o = AbelianOracle::new(spec.clone(), 1e-3, 1, spec.identity(), stream(t, i)).unwrap();
            counts[o.element(t).unwrap().0[0] as usize] += 1;
        }
        let l1: f64 = counts.iter().zip(&exact).map(|(&c, p)| (c as f64 / samples as f64 - p).abs()).sum();
        assert!(l1 <= 0.02, "t = {t}: l1 = {l1}");
    }
}

#[test]
fn abelian_order_independence_on_c4() {
    let spec = GroupSpec::new(vec![4], vec![GroupElement(vec![1]), GroupElement(vec![3])]).unwrap();
    let c4 = walk_oracle::RegularGraph::cayley(spec.clone()).unwrap();
    let times = [3u64, 10, 11, 1 << 20];
    let reference = exact_joint(&c4, 0, &times).unwrap();
    let len = reference.dist.mass.len();
    let make = |seed: u64| {
        let spec = spec.clone();
        move |i| AbelianOracle::new(spec.clone(), 1e-3, 4, spec.identity(), stream(seed, i))
    };
    let (a, _) = sample_joint(make(1), &times, 100_000, &reference, |_| ()).unwrap();
    let (b, _) = sample_joint(make(2), &[11, 1 << 20, 3, 10], 100_000, &reference, |_| ()).unwrap();
    let chi = chi_square_two_sample(&dense_counts(&a, len), &dense_counts(&b, len)).unwrap();
    assert!(chi.p_value > 0.001, "p = {}", chi.p_value);
}

#[test]
fn expander_bridges_do_not_fall_back() {
    // random 5-regular graphs on 256 vertices sit well below lambda = 0.9
    let g = Arc::new(gen_random_regular(256, 5, &mut stream(77, 0)).unwrap().graph);
    let lambda = exact_lambda(&g).unwrap();
    assert!(lambda <= 0.9, "lambda = {lambda}");
    let mut bridges = 0;
    let mut fallbacks = 0;
    for i in 0..5000u64 {
        let session = ProbeSession::new(g.clone(), stream(78, i));
        let mut o = ExpanderOracle::new(session, 0.9, 1e-3, 8, 0).unwrap();
        let k = o.k();
        // two bridges per session; the last two times are already filled in
        for t in [4 * k, 2 * k, 8 * k, 6 * k, 7 * k, 5 * k] {
            o.position(t).unwrap();
        }
        bridges += o.cases().bridge;
        fallbacks += o.fallback_count();
    }
    assert!(bridges >= 10_000, "only {bridges} bridges");
    assert_eq!(fallbacks, 0);
}

#[test]
fn expander_joint_on_sixteen_vertices() {
    let mut rng = stream(0x16, 0);
    let g = loop {
        let g = gen_random_regular(16, 3, &mut rng).unwrap().graph;
        if exact_lambda(&g).unwrap() <= 0.9 {
            break Arc::new(g);
        }
    };
    let k = ExpanderOracle::new(ProbeSession::new(g.clone(), stream(0, 0)), 0.9, 0.01, 6, 0).unwrap().k();
    // forward walk then a short backward walk from a far uniform point
    let queries = [2, 3 * k, 3 * k - 1, 1];
    let reference = exact_joint(&g, 0, &queries).unwrap();
    let make = |i| ExpanderOracle::new(ProbeSession::new(g.clone(), stream(9, i)), 0.9, 0.01, 6, 0);
    let (observed, gaps) = sample_joint(make, &queries, 100_000, &reference, |o| o.gap_invariant_holds()).unwrap();
    assert!(gaps.iter().all(|&ok| ok));
    let est = walk_oracle::stats::summarize(&observed, &reference.dist.mass, 100_000, 1);
    assert!(est.l1 <= 0.1, "l1 = {}", est.l1);
    assert_eq!(est.outside_support, 0);
}
