//! Answer far-apart and nearby queries on a random 3-regular graph.

use std::sync::Arc;

use walk_oracle::expander::ExpanderOracle;
use walk_oracle::gen::gen_random_regular;
use walk_oracle::rng::stream;
use walk_oracle::stats::estimate_lambda;
use walk_oracle::ProbeSession;

fn main() -> walk_oracle::Result<()> {
    let n = 4096;
    let graph = Arc::new(gen_random_regular(n, 3, &mut stream(1, 0))?.graph);
    let lambda = estimate_lambda(&graph, 3000, 1e-7).value;

    let session = ProbeSession::new(graph.clone(), stream(1, 1));
    let mut oracle = ExpanderOracle::new(session, lambda, 1e-3, 100, 0)?;
    let k = oracle.k();
    println!("n = {n}, lambda ~ {lambda:.4}, mixing parameter k = {k}");

    // far, far, backward, far, bridge, then two already determined times
    for t in [1_000_000, 10 * k, 9 * k, 3 * k, 3 * k / 2, 3, 3 * k / 2] {
        let before = oracle.stats().total();
        let v = oracle.position(t)?;
        println!("t = {t:>8} -> vertex {v:>5}  ({} probes)", oracle.stats().total() - before);
    }
    let c = oracle.cases();
    println!(
        "far {}, forward {}, backward {}, bridge {}, memo {}; fallbacks {}",
        c.far,
        c.forward,
        c.backward,
        c.bridge,
        c.memo,
        oracle.fallback_count()
    );
    Ok(())
}
