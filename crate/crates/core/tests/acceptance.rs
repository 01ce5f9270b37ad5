//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Run with `cargo test --test acceptance`.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use rand::Rng;
use rayon::prelude::*;

use walk_oracle::abelian::AbelianOracle;
use walk_oracle::adversary::{
    adaptive_attack, forest_probe_count, forest_trial, oblivious_attack, AttackConfig, AttackTarget, HonestWalker,
    UniformCheater,
};
use walk_oracle::bench::{run_bench, BenchConfig};
use walk_oracle::expander::{CaseCounts, ExpanderOracle};
use walk_oracle::gen::{
    cartesian_product, gen_cycle, gen_hypercube, gen_random_regular, matching_is_simple, tensor_product,
};
use walk_oracle::product::{CartesianOracle, DenseOracle, PowerKind, PowerOracle, TensorOracle};
use walk_oracle::rng::stream;
use walk_oracle::selftest::sampler_selftest;
use walk_oracle::stats::{
    chi_square_two_sample, dense_counts, empirical_joint_l1, estimate_lambda, exact_joint, exact_lambda,
    sample_joint, summarize,
};
use walk_oracle::{Orientation, ProbeSession, RegularGraph};

const SESSIONS: usize = 100_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Result<Outcome>) -> bool {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let (pass, detail) = match result {
        Ok(o) => (o.pass && elapsed <= limit, o.detail),
        Err(e) => (false, format!("error: {e:#}")),
    };
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!(
        "criterion {id} ({name}): {verdict}  {detail}  [{:.1}s, limit {}s]",
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    pass
}

fn minutes(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

// Query sets mixing adjacent, distant and very large times. Each keeps the
// joint support small enough that the plug-in estimate at 10^5 sessions is
// dominated by the oracle's error rather than by sampling noise.
fn abelian_cases() -> Vec<(&'static str, RegularGraph, Vec<Vec<u64>>)> {
    vec![
        (
            "C6",
            gen_cycle(6).unwrap(),
            vec![vec![1, 2, 3, 4], vec![1 << 20, 7, 1001, 1000], vec![3, 1 << 20, 12345]],
        ),
        (
            "Q3",
            gen_hypercube(3).unwrap(),
            vec![vec![1, 2, 3, 4], vec![1, 1000, 1001, 1 << 20], vec![1 << 20, 99999, 2]],
        ),
    ]
}

fn abelian_maker(g: &RegularGraph, seed: u64) -> impl Fn(u64) -> walk_oracle::Result<AbelianOracle> + Sync {
    let spec = g.group_spec().expect("Cayley graph").clone();
    move |i| AbelianOracle::new(spec.clone(), 1e-3, 8, spec.identity(), stream(seed, i))
}

fn criterion_1() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, g, sets) in abelian_cases() {
        for (j, q) in sets.iter().enumerate() {
            let mut times = q.clone();
            times.sort_unstable();
            let reference = exact_joint(&g, 0, &times)?;
            let est = empirical_joint_l1(abelian_maker(&g, 100 + j as u64), q, SESSIONS, &reference, 1)?;
            pass &= est.l1 <= 0.05 + est.ci_half_width && est.outside_support == 0;
            worst = worst.max(est.l1);
            parts.push(format!("{name}#{j} {:.4}+-{:.4}", est.l1, est.ci_half_width));
        }
    }
    Ok(Outcome {
        pass,
        detail: format!("max l1 {worst:.4} (bound 0.05 + CI); {}", parts.join(", ")),
    })
}

fn criterion_2() -> Result<Outcome> {
    let mut min_p: f64 = 1.0;
    let mut pass = true;
    for (name, g, sets) in abelian_cases() {
        for (j, q) in sets.iter().enumerate() {
            let mut forward = q.clone();
            forward.sort_unstable();
            let backward: Vec<u64> = forward.iter().rev().copied().collect();
            let reference = exact_joint(&g, 0, &forward)?;
            let len = reference.dist.mass.len();
            let (a, _) = sample_joint(abelian_maker(&g, 200 + j as u64), &forward, SESSIONS, &reference, |_| ())?;
            let (b, _) = sample_joint(abelian_maker(&g, 300 + j as u64), &backward, SESSIONS, &reference, |_| ())?;
            let chi = chi_square_two_sample(&dense_counts(&a, len), &dense_counts(&b, len))?;
            if chi.p_value <= 0.001 {
                pass = false;
                println!("  order dependence on {name}#{j}: p = {:.2e}", chi.p_value);
            }
            min_p = min_p.min(chi.p_value);
        }
    }
    Ok(Outcome {
        pass,
        detail: format!("min two-sample p {min_p:.4} (bound > 0.001) over 6 time sets"),
    })
}

fn k4() -> RegularGraph {
    RegularGraph::from_lists(
        &[vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]],
        Orientation::Undirected,
    )
    .unwrap()
}

/// First random 3-regular graph on 16 vertices from a fixed stream whose
/// exact spectral bound is at most 0.9.
fn certified_sixteen() -> Result<(RegularGraph, f64)> {
    let mut rng = stream(0x16, 0);
    for _ in 0..1000 {
        let g = gen_random_regular(16, 3, &mut rng)?.graph;
        let l = exact_lambda(&g)?;
        if l <= 0.9 {
            return Ok((g, l));
        }
    }
    bail!("no 16-vertex 3-regular graph with lambda <= 0.9 in 1000 draws")
}

fn add_cases(a: CaseCounts, b: CaseCounts) -> CaseCounts {
    CaseCounts {
        memo: a.memo + b.memo,
        far: a.far + b.far,
        forward: a.forward + b.forward,
        backward: a.backward + b.backward,
        bridge: a.bridge + b.bridge,
    }
}

fn criterion_3() -> Result<Outcome> {
    let (g16, l16) = certified_sixteen()?;
    let graphs = [("K4", Arc::new(k4()), 1.0 / 3.0), ("G16", Arc::new(g16), 0.9)];
    let (eps, budget) = (1e-2, 5);
    let mut pass = true;
    let mut parts = vec![format!("G16 lambda {l16:.4}")];
    let mut total = CaseCounts::default();
    let mut fallbacks = 0;
    for (name, g, lambda) in graphs {
        let k = ExpanderOracle::new(ProbeSession::new(g.clone(), stream(0, 0)), lambda, eps, budget, 0)?.k();
        // far, forward, backward; far, bridge, memo; all five on K4
        let mut sets = vec![vec![3 * k, 1, 3 * k - 1], vec![4 * k, 2 * k, 2 * k]];
        if name == "K4" {
            sets.push(vec![3 * k, 1, 3 * k - 1, 3 * k / 2, 3 * k / 2]);
        }
        for (j, q) in sets.iter().enumerate() {
            let mut times = q.clone();
            times.sort_unstable();
            times.dedup();
            let reference = exact_joint(&g, 0, &times)?;
            let make = |i: u64| ExpanderOracle::new(ProbeSession::new(g.clone(), stream(400 + j as u64, i)), lambda, eps, budget, 0);
            let (observed, extras) = sample_joint(make, q, SESSIONS, &reference, |o| (o.cases(), o.fallback_count()))?;
            let est = summarize(&observed, &reference.dist.mass, SESSIONS, 2);
            for (c, f) in extras {
                total = add_cases(total, c);
                fallbacks += f;
            }
            pass &= est.l1 <= 0.1;
            parts.push(format!("{name} k={k} #{j} l1 {:.4}", est.l1));
        }
    }
    let exercised = total.far > 0 && total.forward > 0 && total.backward > 0 && total.bridge > 0 && total.memo > 0;
    pass &= exercised && fallbacks == 0;
    Ok(Outcome {
        pass,
        detail: format!(
            "{}; cases far {} forward {} backward {} bridge {} memo {}; fallbacks {fallbacks}",
            parts.join(", "),
            total.far,
            total.forward,
            total.backward,
            total.bridge,
            total.memo
        ),
    })
}

fn criterion_4() -> Result<Outcome> {
    let cfg = BenchConfig {
        seed: 4,
        ..BenchConfig::default()
    };
    let report = run_bench(&cfg)?;
    let probes: Vec<String> = report
        .points
        .iter()
        .map(|p| format!("{}:{:.0}", p.n, p.mean_probes_per_query))
        .collect();
    let fallbacks: u64 = report.points.iter().map(|p| p.fallbacks).sum();
    Ok(Outcome {
        pass: (0.35..=0.65).contains(&report.slope),
        detail: format!(
            "slope {:.4} (bound [0.35, 0.65]); probes/query {}; fallbacks {fallbacks}",
            report.slope,
            probes.join(" ")
        ),
    })
}

fn criterion_5() -> Result<Outcome> {
    let c3 = Arc::new(gen_cycle(3)?.materialize());
    let cache = DenseOracle::shared_cache(&c3)?;
    let tensor = tensor_product(&c3, &c3)?;
    let cartesian = cartesian_product(&c3, &c3)?;
    let (eps, budget) = (1e-3, 3);
    let dense = |seed: u64| {
        let (c3, cache) = (c3.clone(), cache.clone());
        move |i: u64| DenseOracle::new(c3.clone(), cache.clone(), eps, budget, 0, stream(seed, i))
    };
    let sets: [Vec<u64>; 3] = [vec![1, 2, 3], vec![51, 1, 50], vec![1000, 3]];
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (j, q) in sets.iter().enumerate() {
        let mut times = q.clone();
        times.sort_unstable();
        let seed = 500 + 10 * j as u64;
        for (name, product) in [("tensor", &tensor), ("cartesian", &cartesian)] {
            let reference = exact_joint(product, 0, &times)?;
            // the dense oracle on the explicit product
            let explicit = Arc::new(product.clone());
            let pcache = DenseOracle::shared_cache(&explicit)?;
            let direct = empirical_joint_l1(
                |i| DenseOracle::new(explicit.clone(), pcache.clone(), eps, budget, 0, stream(seed, i)),
                q,
                SESSIONS,
                &reference,
                3,
            )?;
            let (d1, d2) = (dense(seed + 1), dense(seed + 2));
            let combinator = if name == "tensor" {
                empirical_joint_l1(|i| Ok(TensorOracle::new(d1(i)?, d2(i)?)), q, SESSIONS, &reference, 3)?
            } else {
                empirical_joint_l1(
                    |i| CartesianOracle::new(d1(i)?, 2, d2(i)?, 2, eps, budget, stream(seed + 3, i)),
                    q,
                    SESSIONS,
                    &reference,
                    3,
                )?
            };
            let kind = if name == "tensor" { PowerKind::Tensor } else { PowerKind::Cartesian };
            let power = empirical_joint_l1(
                |i| PowerOracle::build_with_cache(c3.clone(), cache.clone(), 2, kind, eps, budget, 0, seed + 4 + i),
                q,
                SESSIONS,
                &reference,
                3,
            )?;
            worst = worst.max(direct.l1).max(combinator.l1).max(power.l1);
            parts.push(format!(
                "{name}#{j} dense {:.4} pair {:.4} power {:.4}",
                direct.l1, combinator.l1, power.l1
            ));
        }
    }
    Ok(Outcome {
        pass: worst <= 0.05,
        detail: format!("max l1 {worst:.4} (bound 0.05); {}", parts.join(", ")),
    })
}

fn criterion_6() -> Result<Outcome> {
    let eps = 1e-6;
    let r = sampler_selftest(1_000_000, eps, 6)?;
    let worst = r
        .cases
        .iter()
        .map(|c| c.l1 / c.threshold)
        .fold(0.0, f64::max);
    let failed = r.cases.iter().filter(|c| !c.pass).count();
    Ok(Outcome {
        pass: r.pass,
        detail: format!(
            "{} grid cases, {failed} over threshold, worst l1/threshold {worst:.3}; cost ratio {:.2} (bound {:.0})",
            r.cases.len(),
            r.cost.ratio,
            r.cost.bound
        ),
    })
}

fn frequency<F>(trials: usize, f: F) -> Result<f64>
where
    F: Fn(u64) -> Result<bool> + Sync + Send,
{
    let hits: Vec<bool> = (0..trials as u64).into_par_iter().map(f).collect::<Result<_>>()?;
    Ok(hits.iter().filter(|&&h| h).count() as f64 / trials as f64)
}

#[derive(Clone, Copy, PartialEq)]
enum Who {
    Cheater,
    Honest,
    Expander,
}

fn attack_trial(n: usize, adaptive: bool, who: Who, trial: u64) -> Result<bool> {
    let cfg = AttackConfig::default();
    let mut rng = stream(0x7a, ((n as u64) << 20) | trial);
    let graph = Arc::new(gen_random_regular(n, 3, &mut rng)?.graph);
    let start = rng.random_range(0..n);
    let session = ProbeSession::new(graph.clone(), stream(rng.random(), 0));
    let max_time = cfg.walk_len(n).max(cfg.oblivious_e(n));
    let run = |target: &mut dyn AttackTarget| {
        if adaptive {
            adaptive_attack(target, &graph, &cfg)
        } else {
            oblivious_attack(target, &graph, &cfg)
        }
    };
    let report = match who {
        Who::Cheater => run(&mut UniformCheater::new(session, start)),
        Who::Honest => run(&mut HonestWalker::new(session, start, max_time)),
        Who::Expander => {
            let lambda = estimate_lambda(&graph, 3000, 1e-7);
            ensure!(lambda.value < 1.0, "graph is not an expander");
            let budget = cfg.query_cap(n) + 1;
            run(&mut ExpanderOracle::new(session, lambda.value, 1e-3, budget, start)?)
        }
    };
    Ok(report.verdict)
}

fn criterion_7() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, adaptive, label) in [(1024, true, "adaptive n=1024"), (4096, false, "oblivious n=4096")] {
        for who in [Who::Cheater, Who::Honest, Who::Expander] {
            let f = frequency(100, |i| attack_trial(n, adaptive, who, i))?;
            let ok = if who == Who::Cheater { f >= 0.9 } else { f <= 0.1 };
            pass &= ok;
            let name = match who {
                Who::Cheater => "cheater",
                Who::Honest => "honest",
                Who::Expander => "expander",
            };
            parts.push(format!("{label} {name} {f:.2}"));
        }
    }
    Ok(Outcome {
        pass,
        detail: format!("detection frequencies: {}", parts.join(", ")),
    })
}

fn criterion_8() -> Result<Outcome> {
    let n = 100_000;
    let probes = forest_probe_count(n);
    let f = frequency(200, |i| {
        let mut rng = stream(0x8f, i);
        let g = Arc::new(gen_random_regular(n, 3, &mut rng)?.graph);
        Ok(forest_trial(g, probes, stream(0x8f0, i))?.events > 0)
    })?;
    Ok(Outcome {
        pass: f <= 0.05,
        detail: format!("{probes} probes per trial, event frequency {f:.3} (bound 0.05)"),
    })
}

/// All labeled 3-regular graphs on 6 vertices, as sorted edge lists.
fn cubic_graphs_on_six() -> Vec<Vec<(usize, usize)>> {
    let edges: Vec<(usize, usize)> = (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << edges.len() {
        if mask.count_ones() != 9 {
            continue;
        }
        let chosen: Vec<(usize, usize)> = (0..edges.len()).filter(|&i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
        let mut deg = [0; 6];
        for &(u, v) in &chosen {
            deg[u] += 1;
            deg[v] += 1;
        }
        if deg.iter().all(|&d| d == 3) {
            out.push(chosen);
        }
    }
    out
}

fn edge_list(g: &RegularGraph) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = (0..g.n()).flat_map(|u| g.neighbors(u).filter(move |&v| u < v).map(move |v| (u, v))).collect();
    e.sort_unstable();
    e
}

fn criterion_9() -> Result<Outcome> {
    let all = cubic_graphs_on_six();
    ensure!(all.len() == 70, "enumeration found {} graphs", all.len());
    let index: HashMap<Vec<(usize, usize)>, usize> = all.into_iter().enumerate().map(|(i, e)| (e, i)).collect();
    let draws = 100_000u64;
    let chunks = 16u64;
    let tallies: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(0x9a, c);
            let mut counts = vec![0u64; 70];
            for _ in 0..draws / chunks {
                let g = gen_random_regular(6, 3, &mut rng)?.graph;
                let i = index.get(&edge_list(&g)).context("generated graph is not cubic and simple")?;
                counts[*i] += 1;
            }
            Ok(counts)
        })
        .collect::<Result<_>>()?;
    let counts: Vec<u64> = (0..70).map(|i| tallies.iter().map(|t| t[i]).sum()).collect();
    let total: u64 = counts.iter().sum();
    let l1: f64 = counts.iter().map(|&c| (c as f64 / total as f64 - 1.0 / 70.0).abs()).sum();

    let trials = 4000u64;
    let rate = frequency(trials as usize, |i| Ok(matching_is_simple(10_000, 3, &mut stream(0x9b, i))))?;
    Ok(Outcome {
        pass: l1 <= 0.05 && (rate - 0.135).abs() <= 0.03,
        detail: format!("l1 {l1:.4} over 70 graphs (bound 0.05); simple-matching rate {rate:.4} (target 0.135 +- 0.03)"),
    })
}

fn main() {
    let results = [
        run(1, "abelian exactness", minutes(5), criterion_1),
        run(2, "order invariance", minutes(5), criterion_2),
        run(3, "expander oracle", minutes(15), criterion_3),
        run(4, "probe scaling", minutes(30), criterion_4),
        run(5, "product combinators", minutes(10), criterion_5),
        run(6, "sampler certification", minutes(20), criterion_6),
        run(7, "adversary discrimination", minutes(30), criterion_7),
        run(8, "forest events", minutes(10), criterion_8),
        run(9, "generator uniformity", minutes(10), criterion_9),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
