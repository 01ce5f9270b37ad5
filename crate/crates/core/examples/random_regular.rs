//! Uniform random regular graphs by rejection, and how often a raw
//! configuration-model matching is already simple.

use walk_oracle::gen::{gen_random_regular, matching_is_simple};
use walk_oracle::io::graph_to_string;
use walk_oracle::rng::stream;

fn main() -> walk_oracle::Result<()> {
    let mut rng = stream(3, 0);
    let g = gen_random_regular(8, 3, &mut rng)?;
    println!("after {} rejected matchings:\n{}", g.rejections, graph_to_string(&g.graph));

    let trials = 2000;
    let simple = (0..trials).filter(|_| matching_is_simple(10_000, 3, &mut rng)).count();
    println!(
        "simple matchings at n = 10^4, d = 3: {:.3} (limit e^-2 = {:.3})",
        simple as f64 / trials as f64,
        (-2f64).exp()
    );
    Ok(())
}
