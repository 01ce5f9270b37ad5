//! Point the adaptive attack at a cheater, an honest walker and the
//! expander oracle on the same graph.

use std::sync::Arc;

use walk_oracle::adversary::{adaptive_attack, AttackConfig, HonestWalker, UniformCheater};
use walk_oracle::expander::ExpanderOracle;
use walk_oracle::gen::gen_random_regular;
use walk_oracle::rng::stream;
use walk_oracle::stats::estimate_lambda;
use walk_oracle::ProbeSession;

fn main() -> walk_oracle::Result<()> {
    let n = 1024;
    let cfg = AttackConfig::default();
    let graph = Arc::new(gen_random_regular(n, 3, &mut stream(5, 0))?.graph);
    let lambda = estimate_lambda(&graph, 3000, 1e-7).value;
    let session = |i| ProbeSession::new(graph.clone(), stream(5, i));

    let cheat = adaptive_attack(&mut UniformCheater::new(session(1), 0), &graph, &cfg);
    let honest = adaptive_attack(&mut HonestWalker::new(session(2), 0, cfg.walk_len(n)), &graph, &cfg);
    let mut oracle = ExpanderOracle::new(session(3), lambda, 1e-3, cfg.query_cap(n) + 1, 0)?;
    let expander = adaptive_attack(&mut oracle, &graph, &cfg);

    for (name, r) in [("cheater", &cheat), ("honest", &honest), ("expander", &expander)] {
        println!(
            "{name:>8}: detected {:<5} after {} queries, branches {:?}, witness {:?}",
            r.verdict, r.queries, r.branches, r.witness
        );
    }
    Ok(())
}
