//! Positions of a walk on the hypercube (Z_2)^10 at very large times.

use walk_oracle::abelian::AbelianOracle;
use walk_oracle::rng::stream;
use walk_oracle::{GroupElement, GroupSpec};

fn main() -> walk_oracle::Result<()> {
    let dim = 10;
    let gens: Vec<GroupElement> = (0..dim)
        .map(|i| GroupElement((0..dim).map(|j| u64::from(i == j)).collect()))
        .collect();
    let spec = GroupSpec::new(vec![2; dim], gens)?;
    let mut oracle = AbelianOracle::new(spec.clone(), 1e-3, 10, spec.identity(), stream(7, 0))?;

    // answered in any order; later answers stay consistent with earlier ones
    for t in [1u64 << 40, 3, (1 << 40) + 1, 1 << 30, 4] {
        let g = oracle.element(t)?;
        println!("t = {t:>20} -> {:?}", g.0);
    }
    oracle.check_invariants()?;
    Ok(())
}
