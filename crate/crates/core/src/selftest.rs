//! Certification run for the multinomial and multivariate hypergeometric
//! samplers: empirical laws against exhaustive enumeration, and a cost check
//! across six orders of magnitude of the trial count.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::rng::stream;
use crate::sampling::{sample_multinomial, sample_mv_hypergeometric, CountVector, Probabilities, SamplerMode};
use crate::stats::empirical::l1_threshold;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplerCase {
    pub kind: &'static str,
    /// Trials (multinomial) or balls drawn (hypergeometric).
    pub size: u64,
    /// Category weights or urn counts.
    pub params: Vec<u64>,
    pub draws: usize,
    pub l1: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostCheck {
    pub small_t: u64,
    pub large_t: u64,
    pub small_ns_per_draw: f64,
    pub large_ns_per_draw: f64,
    pub ratio: f64,
    /// `(ln large_t / ln small_t)^3`.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfTestReport {
    pub eps: f64,
    pub cases: Vec<SamplerCase>,
    pub cost: CostCheck,
    pub pass: bool,
}

/// All ways to write `t` as an ordered sum of `d` non-negative parts.
pub fn compositions(t: u64, d: usize) -> Vec<Vec<u64>> {
    if d == 1 {
        return vec![vec![t]];
    }
    let mut out = Vec::new();
    for first in 0..=t {
        for mut rest in compositions(t - first, d - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn ratio(num: &BigUint, den: &BigUint) -> f64 {
    let shift = den.bits().saturating_sub(900);
    (num >> shift).to_f64().unwrap_or(0.0) / (den >> shift).to_f64().unwrap_or(f64::INFINITY)
}

/// Exact multinomial law over [`compositions`] of `t`.
pub fn multinomial_pmf(t: u64, weights: &[u64]) -> Vec<(Vec<u64>, f64)> {
    let total: u64 = weights.iter().sum();
    let den = BigUint::from(total).pow(t as u32);
    compositions(t, weights.len())
        .into_iter()
        .map(|k| {
            let mut num = factorial(t);
            for (&ki, &wi) in k.iter().zip(weights) {
                num = num * BigUint::from(wi).pow(ki as u32) / factorial(ki);
            }
            let p = ratio(&num, &den);
            (k, p)
        })
        .collect()
}

/// Exact multivariate hypergeometric law of `m` draws from `counts`.
pub fn mv_hypergeometric_pmf(m: u64, counts: &[u64]) -> Vec<(Vec<u64>, f64)> {
    let total: u64 = counts.iter().sum();
    let den = binom(total, m);
    compositions(m, counts.len())
        .into_iter()
        .map(|k| {
            let num = k.iter().zip(counts).fold(BigUint::one(), |acc, (&ki, &ci)| acc * binom(ci, ki));
            let p = ratio(&num, &den);
            (k, p)
        })
        .collect()
}

fn empirical_l1<F>(pmf: &[(Vec<u64>, f64)], draws: usize, seed: u64, draw: F) -> Result<f64>
where
    F: Fn(&mut crate::rng::WalkRng) -> Result<Vec<u64>> + Sync,
{
    const CHUNKS: usize = 64;
    let per = draws.div_ceil(CHUNKS);
    let tallies: Vec<HashMap<Vec<u64>, u64>> = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, c as u64);
            let mut tally = HashMap::new();
            let todo = per.min(draws.saturating_sub(c * per));
            for _ in 0..todo {
                *tally.entry(draw(&mut rng)?).or_insert(0u64) += 1;
            }
            Ok(tally)
        })
        .collect::<Result<_>>()?;
    let mut counts: HashMap<Vec<u64>, u64> = HashMap::new();
    for t in tallies {
        for (k, c) in t {
            *counts.entry(k).or_default() += c;
        }
    }
    let n = draws as f64;
    let mut l1 = 0.0;
    for (k, p) in pmf {
        let emp = counts.remove(k).unwrap_or(0) as f64 / n;
        l1 += (emp - p).abs();
    }
    // anything left fell outside the support
    l1 += counts.values().sum::<u64>() as f64 / n;
    Ok(l1)
}

fn time_per_draw(t: u64, reps: usize, eps: f64) -> Result<f64> {
    let probs = Probabilities::uniform(4)?;
    let mut rng = stream(0xc057, t);
    for _ in 0..reps / 10 {
        sample_multinomial(t, &probs, eps, SamplerMode::Certified, &mut rng)?;
    }
    let start = Instant::now();
    for _ in 0..reps {
        std::hint::black_box(sample_multinomial(t, &probs, eps, SamplerMode::Certified, &mut rng)?);
    }
    Ok(start.elapsed().as_nanos() as f64 / reps as f64)
}

/// Runs the certification grid with `draws` samples per case.
pub fn sampler_selftest(draws: usize, eps: f64, seed: u64) -> Result<SelfTestReport> {
    let mut cases = Vec::new();
    let weight_sets: [&[u64]; 4] = [&[1, 1], &[1, 2, 3], &[1, 1, 1, 1], &[5, 1, 3, 1]];
    let count_sets: [&[u64]; 4] = [&[25, 25], &[30, 10, 20], &[20, 15, 10, 5], &[1, 49, 3, 7]];
    let mut case_seed = seed;
    for &t in &[1u64, 5, 50] {
        for w in weight_sets {
            case_seed += 1;
            let pmf = multinomial_pmf(t, w);
            let probs = Probabilities::from_weights(w.to_vec())?;
            let l1 = empirical_l1(&pmf, draws, case_seed, |rng| {
                Ok(sample_multinomial(t, &probs, eps, SamplerMode::Certified, rng)?.0)
            })?;
            let mass: Vec<f64> = pmf.iter().map(|(_, p)| *p).collect();
            let threshold = l1_threshold(&mass, draws, eps);
            cases.push(SamplerCase {
                kind: "multinomial",
                size: t,
                params: w.to_vec(),
                draws,
                l1,
                threshold,
                pass: l1 <= threshold,
            });
        }
    }
    for &m in &[1u64, 10, 50] {
        for c in count_sets {
            case_seed += 1;
            let pmf = mv_hypergeometric_pmf(m, c);
            let urn = CountVector(c.to_vec());
            let l1 = empirical_l1(&pmf, draws, case_seed, |rng| {
                Ok(sample_mv_hypergeometric(m, &urn, eps, SamplerMode::Certified, rng)?.0)
            })?;
            let mass: Vec<f64> = pmf.iter().map(|(_, p)| *p).collect();
            let threshold = l1_threshold(&mass, draws, eps);
            cases.push(SamplerCase {
                kind: "mv-hypergeometric",
                size: m,
                params: c.to_vec(),
                draws,
                l1,
                threshold,
                pass: l1 <= threshold,
            });
        }
    }
    let (small_t, large_t) = (1_000u64, 1_000_000_000u64);
    let reps = 200_000;
    let small = time_per_draw(small_t, reps, eps)?;
    let large = time_per_draw(large_t, reps, eps)?;
    let bound = ((large_t as f64).ln() / (small_t as f64).ln()).powi(3);
    let cost = CostCheck {
        small_t,
        large_t,
        small_ns_per_draw: small,
        large_ns_per_draw: large,
        ratio: large / small,
        bound,
        pass: large / small <= bound,
    };
    let pass = cases.iter().all(|c| c.pass) && cost.pass;
    Ok(SelfTestReport { eps, cases, cost, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_normalized() {
        assert_eq!(compositions(2, 3).len(), 6);
        let p: f64 = multinomial_pmf(7, &[1, 2, 3]).iter().map(|x| x.1).sum();
        assert!((p - 1.0).abs() < 1e-12);
        let h = mv_hypergeometric_pmf(3, &[2, 2]);
        let p: f64 = h.iter().map(|x| x.1).sum();
        assert!((p - 1.0).abs() < 1e-12);
        // C(2,1) C(2,2) / C(4,3) = 1/2
        assert!((h.iter().find(|x| x.0 == vec![1, 2]).unwrap().1 - 0.5).abs() < 1e-15);
        assert_eq!(h.iter().find(|x| x.0 == vec![3, 0]).unwrap().1, 0.0);
    }

    #[test]
    fn small_selftest_passes() {
        let r = sampler_selftest(20_000, 1e-6, 1).unwrap();
        assert_eq!(r.cases.len(), 24);
        assert!(r.cases.iter().all(|c| c.pass), "{:?}", r.cases.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    }
}
