//! Compare the joint law of an oracle's answers with the exact one.

use walk_oracle::abelian::AbelianOracle;
use walk_oracle::gen::gen_cycle;
use walk_oracle::rng::stream;
use walk_oracle::stats::{empirical_joint_l1, exact_joint, l1_threshold};

fn main() -> walk_oracle::Result<()> {
    let c6 = gen_cycle(6)?;
    let spec = c6.group_spec().expect("cycles are Cayley graphs").clone();
    let queries = [1 << 20, 3, 1000];
    let mut times = queries.to_vec();
    times.sort_unstable();

    let reference = exact_joint(&c6, 0, &times)?;
    let samples = 50_000;
    let est = empirical_joint_l1(
        |i| AbelianOracle::new(spec.clone(), 1e-3, 3, spec.identity(), stream(9, i)),
        &queries,
        samples,
        &reference,
        9,
    )?;
    let bound = l1_threshold(&reference.dist.mass, samples, 1e-3);
    println!(
        "l1 = {:.4} +- {:.4}, sampling-noise bound {bound:.4}",
        est.l1, est.ci_half_width
    );
    Ok(())
}
