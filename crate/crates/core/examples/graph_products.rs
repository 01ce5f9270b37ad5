//! Walks on tensor and Cartesian powers of a triangle, assembled from
//! oracles for the factor.

use std::sync::Arc;

use walk_oracle::gen::{gen_cycle, split_pair};
use walk_oracle::product::{CartesianOracle, DenseOracle, PowerKind, PowerOracle, TensorOracle};
use walk_oracle::rng::stream;
use walk_oracle::LocalWalk;

fn main() -> walk_oracle::Result<()> {
    let c3 = Arc::new(gen_cycle(3)?.materialize());
    let cache = DenseOracle::shared_cache(&c3)?;
    let factor = |seed| DenseOracle::new(c3.clone(), cache.clone(), 1e-3, 10, 0, stream(seed, 0));

    let mut tensor = TensorOracle::new(factor(1)?, factor(2)?);
    let mut cartesian = CartesianOracle::new(factor(3)?, 2, factor(4)?, 2, 1e-3, 10, stream(5, 0))?;
    for t in [1u64, 2, 1000] {
        println!(
            "t = {t:>4}: tensor {:?}  cartesian {:?}",
            tensor.pair(t)?,
            split_pair(cartesian.position(t)?, 3)
        );
    }

    // the 20th Cartesian power has 3^20 vertices; only the factor is ever stored
    let mut power = PowerOracle::build(c3, 20, PowerKind::Cartesian, 1e-3, 10, 0, 6)?;
    println!("depth {} tree, t = 10^6: {:?}", power.depth(), power.tuple(1_000_000)?);
    Ok(())
}
