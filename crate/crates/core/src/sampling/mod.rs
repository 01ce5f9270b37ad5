//! Multinomial and multivariate hypergeometric sampling with an explicit
//! total-variation tolerance per call.

pub mod exact;
pub mod loader;
pub mod univariate;

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

pub use univariate::{binomial, float_error_bound, hypergeometric};

/// Certified draws (default) or `rand_distr`'s uncertified samplers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerMode {
    #[default]
    Certified,
    Fast,
}

/// Exact rational probability vector stored as integer weights over a
/// common denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probabilities {
    weights: Vec<u64>,
    total: u64,
}

impl Probabilities {
    pub fn uniform(d: usize) -> Result<Self> {
        Self::from_weights(vec![1; d])
    }

    /// Probabilities proportional to `weights`.
    pub fn from_weights(weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() {
            return input("probability vector is empty");
        }
        let total = weights
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .ok_or_else(|| crate::Error::Input("weights overflow u64".into()))?;
        if total == 0 {
            return input("all weights are zero");
        }
        Ok(Self { weights, total })
    }

    /// From `(numerator, denominator)` pairs that must sum to exactly 1.
    pub fn from_ratios(ratios: &[(u64, u64)]) -> Result<Self> {
        if ratios.iter().any(|&(_, den)| den == 0) {
            return input("zero denominator");
        }
        let lcm = ratios
            .iter()
            .try_fold(1u64, |acc, &(_, den)| (acc / acc.gcd(&den)).checked_mul(den));
        let lcm = lcm.ok_or_else(|| crate::Error::Input("denominators too large".into()))?;
        let weights: Vec<u64> = ratios.iter().map(|&(num, den)| num.saturating_mul(lcm / den)).collect();
        let sum: u128 = weights.iter().map(|&w| w as u128).sum();
        if sum != lcm as u128 {
            return input("probabilities do not sum to 1");
        }
        Self::from_weights(weights)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn get(&self, i: usize) -> f64 {
        self.weights[i] as f64 / self.total as f64
    }
}

/// Non-negative counts, one per category.
///
/// Counts are `u64`: walk lengths are bounded by `2^63` so every count fits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountVector(pub Vec<u64>);

impl CountVector {
    pub fn zeros(d: usize) -> Self {
        Self(vec![0; d])
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }
}

fn per_draw_eps(eps: f64, d: usize) -> Result<f64> {
    if !(eps > 0.0) {
        return input(format!("tolerance must be positive, got {eps}"));
    }
    Ok(eps / (d.saturating_sub(1)).max(1) as f64)
}

/// `MNom(t, probs)` within `eps` in total variation, by `d - 1` conditional
/// binomial draws each allotted `eps / (d - 1)`.
pub fn sample_multinomial<R: Rng + ?Sized>(
    t: u64,
    probs: &Probabilities,
    eps: f64,
    mode: SamplerMode,
    rng: &mut R,
) -> Result<CountVector> {
    let d = probs.len();
    let eps_i = per_draw_eps(eps, d)?;
    let mut out = vec![0u64; d];
    let mut left = t;
    let mut weight_left = probs.total;
    for i in 0..d - 1 {
        if left == 0 {
            break;
        }
        let w = probs.weights[i];
        let x = binomial(left, w, weight_left, eps_i, mode, rng)?;
        out[i] = x;
        left -= x;
        weight_left -= w;
    }
    out[d - 1] += left;
    Ok(CountVector(out))
}

/// `MHGeom(m, counts)`: colors of `m` balls drawn without replacement, within
/// `eps` in total variation.
pub fn sample_mv_hypergeometric<R: Rng + ?Sized>(
    m: u64,
    counts: &CountVector,
    eps: f64,
    mode: SamplerMode,
    rng: &mut R,
) -> Result<CountVector> {
    let d = counts.len();
    if d == 0 {
        return input("no categories");
    }
    let eps_i = per_draw_eps(eps, d)?;
    let population = counts
        .0
        .iter()
        .try_fold(0u64, |acc, &c| acc.checked_add(c))
        .ok_or_else(|| crate::Error::Input("population overflows u64".into()))?;
    if m > population {
        return input(format!("cannot draw {m} from a population of {population}"));
    }
    let mut out = vec![0u64; d];
    let mut left = m;
    let mut pop_left = population;
    for i in 0..d - 1 {
        if left == 0 {
            break;
        }
        let c = counts.0[i];
        let x = hypergeometric(left, c, pop_left, eps_i, mode, rng)?;
        out[i] = x;
        left -= x;
        pop_left -= c;
    }
    out[d - 1] += left;
    Ok(CountVector(out))
}
