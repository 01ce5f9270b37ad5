//! Multinomial and multivariate hypergeometric draws with a certified
//! total-variation error, from tiny to huge parameters.

use walk_oracle::rng::stream;
use walk_oracle::sampling::{sample_multinomial, sample_mv_hypergeometric, CountVector, Probabilities, SamplerMode};

fn main() -> walk_oracle::Result<()> {
    let mut rng = stream(11, 0);
    let probs = Probabilities::from_weights(vec![1, 2, 3, 4])?;
    for t in [10u64, 1_000_000, 1 << 40] {
        let c = sample_multinomial(t, &probs, 1e-6, SamplerMode::Certified, &mut rng)?;
        println!("multinomial t = {t:>16}: {:?}", c.0);
    }
    let urn = CountVector(vec![1 << 40, 3 << 40, 5]);
    let c = sample_mv_hypergeometric(1 << 41, &urn, 1e-6, SamplerMode::Certified, &mut rng)?;
    println!("hypergeometric draw of 2^41 balls: {:?}", c.0);
    Ok(())
}
