//! Dense transition matrices, cached dyadic powers, and integer walk counts.

use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::graph::{RegularGraph, Vertex};

/// Unit roundoff of `f64`.
const U: f64 = f64::EPSILON / 2.0;

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { n, data }
    }

    /// `W[u][v]` = fraction of `u`'s slots leading to `v`.
    pub fn transition(g: &RegularGraph) -> Self {
        let n = g.n();
        let step = 1.0 / g.d() as f64;
        let mut data = vec![0.0; n * n];
        for u in 0..n {
            for v in g.neighbors(u) {
                data[u * n + v] += step;
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            let out = &mut data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Matrix { n, data }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for (k, &a) in x.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (o, b) in out.iter_mut().zip(self.row(k)) {
                *o += a * b;
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, y: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(y).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn pow(&self, mut t: u64) -> Matrix {
        let mut result = Matrix::identity(self.n);
        let mut base = self.clone();
        while t > 0 {
            if t & 1 == 1 {
                result = result.mul(&base);
            }
            t >>= 1;
            if t > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Per-product growth of the row-l1 rounding error bound.
    pub fn product_error(&self) -> f64 {
        (self.n as f64 + 2.0) * U * 1.01
    }
}

/// Lazily built squares `W^(2^j)` with row-l1 error bounds, shared between
/// all sessions on one graph.
#[derive(Debug)]
pub struct PowerCache {
    squares: RwLock<Vec<(Arc<Matrix>, f64)>>,
}

impl PowerCache {
    pub fn new(g: &RegularGraph) -> Self {
        let w = Matrix::transition(g);
        let err = g.d() as f64 * U;
        Self {
            squares: RwLock::new(vec![(Arc::new(w), err)]),
        }
    }

    pub fn n(&self) -> usize {
        self.squares.read().expect("power cache poisoned")[0].0.n()
    }

    /// `W^(2^j)` and its error bound.
    pub fn square(&self, j: usize) -> (Arc<Matrix>, f64) {
        {
            let sq = self.squares.read().expect("power cache poisoned");
            if let Some((m, e)) = sq.get(j) {
                return (m.clone(), *e);
            }
        }
        let mut sq = self.squares.write().expect("power cache poisoned");
        while sq.len() <= j {
            let (last, e) = sq.last().cloned().expect("cache starts non-empty");
            let next = last.mul(&last);
            let err = 2.0 * e + last.product_error();
            sq.push((Arc::new(next), err));
        }
        let (m, e) = &sq[j];
        (m.clone(), *e)
    }

    /// `x W^t` for a probability row vector `x`, plus an l1 error bound.
    pub fn row_power(&self, mut x: Vec<f64>, t: u64) -> (Vec<f64>, f64) {
        let mut err = 0.0;
        let mut j = 0;
        let mut t = t;
        while t > 0 {
            if t & 1 == 1 {
                let (m, e) = self.square(j);
                x = m.vec_mul(&x);
                err += e + m.product_error();
            }
            t >>= 1;
            j += 1;
        }
        (x, err)
    }

    /// `W^t e_b`, i.e. the column of `W^t` at `b`, plus a max-entry error bound.
    pub fn col_power(&self, b: Vertex, t: u64) -> (Vec<f64>, f64) {
        let n = self.n();
        let mut y = vec![0.0; n];
        y[b] = 1.0;
        let mut err = 0.0;
        let mut j = 0;
        let mut t = t;
        while t > 0 {
            if t & 1 == 1 {
                let (m, e) = self.square(j);
                y = m.mul_vec(&y);
                err += e + m.product_error();
            }
            t >>= 1;
            j += 1;
        }
        (y, err)
    }
}

/// Numbers of slot sequences of length `t` from `start` to each vertex.
pub fn walk_counts_from(g: &RegularGraph, start: Vertex, t: u64) -> Vec<BigUint> {
    let n = g.n();
    let mut c = vec![BigUint::zero(); n];
    c[start] = BigUint::from(1u32);
    for _ in 0..t {
        let mut next = vec![BigUint::zero(); n];
        for (u, cu) in c.iter().enumerate() {
            if cu.is_zero() {
                continue;
            }
            for w in g.neighbors(u) {
                next[w] += cu;
            }
        }
        c = next;
    }
    c
}

/// Numbers of slot sequences of length `t` from each vertex to `target`.
pub fn walk_counts_to(g: &RegularGraph, target: Vertex, t: u64) -> Vec<BigUint> {
    let n = g.n();
    let mut c = vec![BigUint::zero(); n];
    c[target] = BigUint::from(1u32);
    for _ in 0..t {
        c = (0..n)
            .map(|u| g.neighbors(u).map(|w| &c[w]).sum())
            .collect();
    }
    c
}
