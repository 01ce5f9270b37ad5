//! Spectral bounds three ways: closed form on Cayley graphs, dense
//! eigendecomposition, and power iteration.

use walk_oracle::gen::{gen_cycle, gen_hypercube, gen_random_regular};
use walk_oracle::rng::stream;
use walk_oracle::stats::{cayley_lambda, estimate_lambda, exact_lambda};

fn main() -> walk_oracle::Result<()> {
    let c9 = gen_cycle(9)?;
    println!("C9: characters {:.6}, cos(pi/9) = {:.6}", cayley_lambda(c9.group_spec().unwrap())?, (std::f64::consts::PI / 9.0).cos());
    let q4 = gen_hypercube(4)?;
    println!("Q4: characters {:.6} (bipartite)", cayley_lambda(q4.group_spec().unwrap())?);

    let g = gen_random_regular(512, 3, &mut stream(2, 0))?.graph;
    let est = estimate_lambda(&g, 3000, 1e-9);
    println!(
        "random 3-regular, n = 512: exact {:.6}, power iteration {:.6} ({} iterations), 2 sqrt(2) / 3 = {:.6}",
        exact_lambda(&g)?,
        est.value,
        est.iterations,
        8f64.sqrt() / 3.0
    );
    Ok(())
}
