//! Reference laws of walk positions, computed from transition-matrix powers.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::matrix::{walk_counts_from, walk_counts_to, Matrix, PowerCache};
use crate::error::{infeasible, input, Error, Result};
use crate::graph::{RegularGraph, Vertex};

/// Largest graph accepted by [`exact_marginal`].
pub const MAX_MARGINAL_N: usize = 4096;
/// Dense repeated squaring is used up to this size; sparse stepping above.
pub const DENSE_LIMIT: usize = 256;
/// Limits of the big-integer references.
pub const MAX_RATIONAL_N: usize = 64;
pub const MAX_RATIONAL_T: u64 = 4096;
/// Limits of [`exact_joint`].
pub const MAX_JOINT_N: usize = 16;
pub const MAX_JOINT_TIMES: usize = 6;

/// Probability vector with a bound on its l1 distance from the true law.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    pub mass: Vec<f64>,
    pub error_bound: f64,
}

impl Distribution {
    pub fn point(n: usize, v: Vertex) -> Self {
        let mut mass = vec![0.0; n];
        mass[v] = 1.0;
        Self { mass, error_bound: 0.0 }
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            mass: vec![1.0 / n as f64; n],
            error_bound: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }
}

/// Exact law as integer weights over a common total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDistribution {
    pub weights: Vec<BigUint>,
    pub total: BigUint,
}

impl ExactDistribution {
    pub fn to_distribution(&self) -> Distribution {
        // keep 1000 bits so ratios convert without overflow or precision loss
        let shift = self.total.bits().saturating_sub(1000);
        let total = (&self.total >> shift).to_f64().unwrap_or(f64::INFINITY);
        Distribution {
            mass: self
                .weights
                .iter()
                .map(|w| (w >> shift).to_f64().unwrap_or(0.0) / total)
                .collect(),
            error_bound: self.weights.len() as f64 * f64::EPSILON,
        }
    }
}

/// Joint law of positions at `times` (sorted, distinct). Tuples are indexed
/// big-endian: the earliest time is the most significant digit.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    pub times: Vec<u64>,
    pub n: usize,
    pub dist: Distribution,
}

impl JointDistribution {
    pub fn index_of(&self, tuple: &[Vertex]) -> usize {
        tuple.iter().fold(0, |acc, &v| acc * self.n + v)
    }

    pub fn tuple_of(&self, mut idx: usize) -> Vec<Vertex> {
        let mut out = vec![0; self.times.len()];
        for slot in out.iter_mut().rev() {
            *slot = idx % self.n;
            idx /= self.n;
        }
        out
    }
}

fn check_vertex(g: &RegularGraph, v: Vertex) -> Result<()> {
    if v >= g.n() {
        return input(format!("vertex {v} out of range (n = {})", g.n()));
    }
    Ok(())
}

/// Law of the position at time `t` of a walk from `start`.
pub fn exact_marginal(g: &RegularGraph, start: Vertex, t: u64) -> Result<Distribution> {
    check_vertex(g, start)?;
    let n = g.n();
    if n > MAX_MARGINAL_N {
        return input(format!("exact marginal limited to n <= {MAX_MARGINAL_N}"));
    }
    if n <= DENSE_LIMIT {
        let cache = PowerCache::new(g);
        let (mass, error_bound) = cache.row_power(Distribution::point(n, start).mass, t);
        return Ok(Distribution { mass, error_bound });
    }
    let work = t.saturating_mul((n * g.d()) as u64);
    if work > 4_000_000_000 {
        return input(format!("sparse marginal at t = {t} on n = {n} is too expensive"));
    }
    let step = 1.0 / g.d() as f64;
    let mut x = Distribution::point(n, start).mass;
    for _ in 0..t {
        let mut next = vec![0.0; n];
        for (u, &xu) in x.iter().enumerate() {
            if xu == 0.0 {
                continue;
            }
            for w in g.neighbors(u) {
                next[w] += xu * step;
            }
        }
        x = next;
    }
    let error_bound = t as f64 * (g.d() as f64 + 2.0) * f64::EPSILON;
    Ok(Distribution { mass: x, error_bound })
}

/// Exact marginal with integer walk counts over `d^t`.
pub fn exact_marginal_rational(g: &RegularGraph, start: Vertex, t: u64) -> Result<ExactDistribution> {
    check_vertex(g, start)?;
    if g.n() > MAX_RATIONAL_N || t > MAX_RATIONAL_T {
        return input(format!(
            "rational marginal limited to n <= {MAX_RATIONAL_N}, t <= {MAX_RATIONAL_T}"
        ));
    }
    let weights = walk_counts_from(g, start, t);
    Ok(ExactDistribution {
        weights,
        total: BigUint::from(g.d()).pow(t as u32),
    })
}

/// Law of the time-`m` position of an `l`-step walk pinned at both ends.
pub fn exact_bridge(
    g: &RegularGraph,
    v_minus: Vertex,
    v_plus: Vertex,
    l: u64,
    m: u64,
) -> Result<Distribution> {
    check_vertex(g, v_minus)?;
    check_vertex(g, v_plus)?;
    if m > l {
        return input(format!("bridge time {m} exceeds length {l}"));
    }
    if g.n() > DENSE_LIMIT {
        return input(format!("bridge limited to n <= {DENSE_LIMIT}"));
    }
    let cache = PowerCache::new(g);
    bridge_from_cache(&cache, v_minus, v_plus, l, m)
}

/// Bridge law computed from shared cached powers.
pub fn bridge_from_cache(
    cache: &PowerCache,
    v_minus: Vertex,
    v_plus: Vertex,
    l: u64,
    m: u64,
) -> Result<Distribution> {
    let n = cache.n();
    let (left, e_l) = cache.row_power(Distribution::point(n, v_minus).mass, m);
    let (right, e_r) = cache.col_power(v_plus, l - m);
    let w: Vec<f64> = left.iter().zip(&right).map(|(a, b)| a * b).collect();
    let z: f64 = w.iter().sum();
    if z <= 0.0 {
        return infeasible(format!("no {l}-step walk from {v_minus} to {v_plus}"));
    }
    // sum |w~ - w| <= e_l * max(right) + sum(left) * e_r, then normalisation doubles it
    let abs_err = e_l * (1.0 + e_r) + (1.0 + e_l) * e_r * n as f64;
    let error_bound = 2.0 * abs_err / z + n as f64 * f64::EPSILON;
    Ok(Distribution {
        mass: w.iter().map(|x| x / z).collect(),
        error_bound,
    })
}

/// Exact bridge weights `A^m[a, v] A^(l-m)[v, b]`.
pub fn exact_bridge_rational(
    g: &RegularGraph,
    v_minus: Vertex,
    v_plus: Vertex,
    l: u64,
    m: u64,
) -> Result<ExactDistribution> {
    check_vertex(g, v_minus)?;
    check_vertex(g, v_plus)?;
    if m > l {
        return input(format!("bridge time {m} exceeds length {l}"));
    }
    if g.n() > MAX_RATIONAL_N || l > MAX_RATIONAL_T {
        return input(format!(
            "rational bridge limited to n <= {MAX_RATIONAL_N}, l <= {MAX_RATIONAL_T}"
        ));
    }
    let left = walk_counts_from(g, v_minus, m);
    let right = walk_counts_to(g, v_plus, l - m);
    let weights: Vec<BigUint> = left.iter().zip(&right).map(|(a, b)| a * b).collect();
    let total: BigUint = weights.iter().sum();
    if total.is_zero() {
        return infeasible(format!("no {l}-step walk from {v_minus} to {v_plus}"));
    }
    Ok(ExactDistribution { weights, total })
}

/// Joint law of the positions at `times` of a walk from `start`.
pub fn exact_joint(g: &RegularGraph, start: Vertex, times: &[u64]) -> Result<JointDistribution> {
    check_vertex(g, start)?;
    let mut ts = times.to_vec();
    ts.sort_unstable();
    ts.dedup();
    let n = g.n();
    if ts.is_empty() {
        return input("no times given");
    }
    if n > MAX_JOINT_N || ts.len() > MAX_JOINT_TIMES {
        return input(format!(
            "exact joint limited to n <= {MAX_JOINT_N} and at most {MAX_JOINT_TIMES} times"
        ));
    }
    let cache = PowerCache::new(g);
    let (first, mut err) = cache.row_power(Distribution::point(n, start).mass, ts[0]);
    let mut mass = first;
    for w in ts.windows(2) {
        let gap = w[1] - w[0];
        let (step, e) = step_matrix(&cache, gap);
        err += e;
        let mut next = Vec::with_capacity(mass.len() * n);
        for (idx, &p) in mass.iter().enumerate() {
            let last = idx % n;
            next.extend(step.row(last).iter().map(|q| p * q));
        }
        mass = next;
    }
    err += mass.len() as f64 * f64::EPSILON;
    Ok(JointDistribution {
        times: ts,
        n,
        dist: Distribution { mass, error_bound: err },
    })
}

fn step_matrix(cache: &PowerCache, t: u64) -> (Matrix, f64) {
    let n = cache.n();
    let mut m = Matrix::identity(n);
    let mut err = 0.0;
    let mut j = 0;
    let mut t = t;
    while t > 0 {
        if t & 1 == 1 {
            let (sq, e) = cache.square(j);
            m = m.mul(&sq);
            err += e + sq.product_error();
        }
        t >>= 1;
        j += 1;
    }
    (m, err)
}

/// `sum |p_i - q_i|`.
pub fn l1_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Input(format!(
            "supports differ: {} vs {} entries",
            p.len(),
            q.len()
        )));
    }
    Ok(p.mass.iter().zip(&q.mass).map(|(a, b)| (a - b).abs()).sum())
}
