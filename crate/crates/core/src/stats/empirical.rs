//! Monte Carlo comparison of oracle answers against reference laws.

use std::collections::HashMap;

use rand_distr::{Binomial, Distribution as _};
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::exact::JointDistribution;
use crate::error::{input, Result};
use crate::rng::stream;
use crate::walk::LocalWalk;

/// Bootstrap replicates used for confidence intervals.
pub const BOOTSTRAP_REPLICATES: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalL1 {
    /// Plug-in l1 distance between the empirical and reference laws.
    pub l1: f64,
    /// Half-width of the central 95% bootstrap interval.
    pub ci_half_width: f64,
    pub samples: usize,
    /// Samples landing on tuples of reference probability zero.
    pub outside_support: u64,
}

/// Runs `samples` fresh oracles built by `make(i)`, asks each the `queries`
/// in the given order, and compares the joint law of the answers with
/// `reference`, whose times must be the distinct query times.
pub fn empirical_joint_l1<W, F>(
    make: F,
    queries: &[u64],
    samples: usize,
    reference: &JointDistribution,
    seed: u64,
) -> Result<EmpiricalL1>
where
    W: LocalWalk,
    F: Fn(u64) -> Result<W> + Sync,
{
    let (observed, _) = sample_joint(make, queries, samples, reference, |_| ())?;
    Ok(summarize(&observed, &reference.dist.mass, samples, seed))
}

/// Sparse tallies `(joint index, count)` of the answers of `samples` fresh
/// oracles, plus whatever `inspect` reads off each oracle once it has
/// answered every query (in session order).
pub fn sample_joint<W, F, G, S>(
    make: F,
    queries: &[u64],
    samples: usize,
    reference: &JointDistribution,
    inspect: G,
) -> Result<(Vec<(usize, u64)>, Vec<S>)>
where
    W: LocalWalk,
    F: Fn(u64) -> Result<W> + Sync,
    G: Fn(&W) -> S + Sync,
    S: Send,
{
    let mut distinct = queries.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct != reference.times {
        return input("query times do not match the reference times");
    }
    if samples == 0 {
        return input("need at least one sample");
    }
    let slot: HashMap<u64, usize> = reference.times.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let runs: Vec<(usize, S)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut oracle = make(i)?;
            let mut tuple = vec![0; reference.times.len()];
            for &t in queries {
                tuple[slot[&t]] = oracle.position(t)?;
            }
            Ok((reference.index_of(&tuple), inspect(&oracle)))
        })
        .collect::<Result<_>>()?;
    let mut counts: HashMap<usize, u64> = HashMap::new();
    let mut extras = Vec::with_capacity(runs.len());
    for (i, extra) in runs {
        *counts.entry(i).or_default() += 1;
        extras.push(extra);
    }
    let mut observed: Vec<(usize, u64)> = counts.into_iter().collect();
    observed.sort_unstable();
    Ok((observed, extras))
}

/// Dense counts over all `len` joint indices from sparse tallies.
pub fn dense_counts(observed: &[(usize, u64)], len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for &(i, c) in observed {
        out[i] += c;
    }
    out
}

/// Plug-in l1 and bootstrap interval from sparse counts `(index, count)`.
pub fn summarize(observed: &[(usize, u64)], reference: &[f64], samples: usize, seed: u64) -> EmpiricalL1 {
    let n = samples as f64;
    let seen_mass: f64 = observed.iter().map(|&(i, _)| reference[i]).sum();
    let unseen = (reference.iter().sum::<f64>() - seen_mass).max(0.0);
    let l1_of = |counts: &mut dyn Iterator<Item = (usize, u64)>| -> f64 {
        unseen + counts.map(|(i, c)| (c as f64 / n - reference[i]).abs()).sum::<f64>()
    };
    let l1 = l1_of(&mut observed.iter().copied());
    let outside_support = observed.iter().filter(|&&(i, _)| reference[i] == 0.0).map(|&(_, c)| c).sum();

    let probs: Vec<f64> = observed.iter().map(|&(_, c)| c as f64 / n).collect();
    let mut reps: Vec<f64> = (0..BOOTSTRAP_REPLICATES as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(seed, r);
            let resampled = multinomial_fast(samples as u64, &probs, &mut rng);
            l1_of(&mut observed.iter().zip(resampled).map(|(&(i, _), c)| (i, c)))
        })
        .collect();
    reps.sort_by(f64::total_cmp);
    let lo = reps[(0.025 * (reps.len() - 1) as f64).round() as usize];
    let hi = reps[(0.975 * (reps.len() - 1) as f64).round() as usize];
    EmpiricalL1 {
        l1,
        ci_half_width: (hi - lo) / 2.0,
        samples,
        outside_support,
    }
}

fn multinomial_fast<R: rand::Rng>(mut t: u64, probs: &[f64], rng: &mut R) -> Vec<u64> {
    let mut rest = 1.0;
    let mut out = Vec::with_capacity(probs.len());
    for &p in probs {
        let q = if rest > 0.0 { (p / rest).clamp(0.0, 1.0) } else { 0.0 };
        let k = Binomial::new(t, q).map(|b| b.sample(rng)).unwrap_or(t);
        out.push(k);
        t -= k;
        rest -= p;
    }
    if let Some(last) = out.last_mut() {
        *last += t;
    }
    out
}

/// Plug-in l1 distance of dense counts from a reference law.
pub fn counts_l1(counts: &[u64], reference: &[f64]) -> f64 {
    let n: u64 = counts.iter().sum();
    counts
        .iter()
        .zip(reference)
        .map(|(&c, p)| (c as f64 / n as f64 - p).abs())
        .sum()
}

/// Acceptance threshold for the plug-in l1 of `samples` draws from a law
/// within `eps` of `reference`: `eps` plus the worst-case expected sampling
/// l1 plus three standard deviations of the bounded-differences fluctuation.
pub fn l1_threshold(reference: &[f64], samples: usize, eps: f64) -> f64 {
    let n = samples as f64;
    let bias: f64 = reference.iter().map(|p| (p * (1.0 - p) / n).sqrt()).sum();
    eps + bias + 3.0 / n.sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquare {
    fn from_statistic(statistic: f64, bins: usize) -> Self {
        if bins < 2 {
            return Self { statistic: 0.0, dof: 0, p_value: 1.0 };
        }
        let dof = bins - 1;
        let p_value = if statistic.is_finite() {
            ChiSquared::new(dof as f64).map(|c| c.sf(statistic)).unwrap_or(0.0)
        } else {
            0.0
        };
        Self { statistic, dof, p_value }
    }
}

/// Groups consecutive categories until each group's `weight` reaches `min`;
/// a short tail joins the last group.
fn pool(weights: &[f64], min: f64) -> Vec<Vec<usize>> {
    let mut bins: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::new();
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        cur.push(i);
        acc += w;
        if acc >= min {
            bins.push(std::mem::take(&mut cur));
            acc = 0.0;
        }
    }
    if !cur.is_empty() {
        match bins.last_mut() {
            Some(last) => last.extend(cur),
            None => bins.push(cur),
        }
    }
    bins
}

/// Goodness of fit of `observed` counts to `probs`, pooling cells with
/// expected count below five.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> Result<ChiSquare> {
    if observed.len() != probs.len() {
        return input("observed and expected lengths differ");
    }
    let n: u64 = observed.iter().sum();
    let n = n as f64;
    if observed.iter().zip(probs).any(|(&o, &p)| o > 0 && p == 0.0) {
        return Ok(ChiSquare::from_statistic(f64::INFINITY, observed.len().max(2)));
    }
    let expected: Vec<f64> = probs.iter().map(|p| p * n).collect();
    let bins = pool(&expected, 5.0);
    let statistic = bins
        .iter()
        .map(|b| {
            let o: f64 = b.iter().map(|&i| observed[i] as f64).sum();
            let e: f64 = b.iter().map(|&i| expected[i]).sum();
            if e > 0.0 {
                (o - e).powi(2) / e
            } else {
                0.0
            }
        })
        .sum();
    Ok(ChiSquare::from_statistic(statistic, bins.len()))
}

/// Two-sample homogeneity test of count vectors over the same categories.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> Result<ChiSquare> {
    if a.len() != b.len() {
        return input("count vectors differ in length");
    }
    let na = a.iter().sum::<u64>() as f64;
    let nb = b.iter().sum::<u64>() as f64;
    if na == 0.0 || nb == 0.0 {
        return input("empty sample");
    }
    let pooled: Vec<f64> = a.iter().zip(b).map(|(&x, &y)| (x + y) as f64).collect();
    let bins = pool(&pooled, 10.0);
    let (ka, kb) = ((nb / na).sqrt(), (na / nb).sqrt());
    let statistic = bins
        .iter()
        .map(|bin| {
            let x: f64 = bin.iter().map(|&i| a[i] as f64).sum();
            let y: f64 = bin.iter().map(|&i| b[i] as f64).sum();
            if x + y > 0.0 {
                (ka * x - kb * y).powi(2) / (x + y)
            } else {
                0.0
            }
        })
        .sum();
    Ok(ChiSquare::from_statistic(statistic, bins.len()))
}
