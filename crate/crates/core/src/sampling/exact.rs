//! Exact integer probability tables and exact inverse-CDF draws.
//!
//! Used when a caller asks for more accuracy than the floating-point path
//! can certify, and as the reference in tests.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

/// Largest support handled by exact tables.
pub const MAX_EXACT_SUPPORT: u64 = 4096;
/// Largest bit length of an exact table total.
pub const MAX_EXACT_BITS: u64 = 1 << 17;

/// Binomial coefficients `C(n, 0..=n)`.
pub fn binomial_row(n: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * BigUint::from(n - k) / BigUint::from(k + 1);
        row.push(c.clone());
    }
    row
}

/// Integer weights `C(t, k) a^k (w - a)^(t - k)` for `k = 0..=t`; they sum
/// to `w^t`.
pub fn binomial_weights(t: u64, a: u64, w: u64) -> Vec<BigUint> {
    let b = w - a;
    let coeffs = binomial_row(t);
    let a_big = BigUint::from(a);
    let b_big = BigUint::from(b);
    // b^(t-k) for k descending, a^k ascending
    let mut b_pows = Vec::with_capacity(t as usize + 1);
    let mut acc = BigUint::one();
    for _ in 0..=t {
        b_pows.push(acc.clone());
        acc *= &b_big;
    }
    let mut a_pow = BigUint::one();
    let mut out = Vec::with_capacity(t as usize + 1);
    for (k, c) in coeffs.into_iter().enumerate() {
        out.push(c * &a_pow * &b_pows[t as usize - k]);
        a_pow *= &a_big;
    }
    out
}

/// Weights `C(succ, k) C(total - succ, m - k)` for `k = 0..=min(m, succ)`;
/// they sum to `C(total, m)`.
pub fn hypergeometric_weights(m: u64, succ: u64, total: u64) -> Vec<BigUint> {
    let fail = total - succ;
    let s_row = binomial_row(succ);
    let f_row = binomial_row(fail);
    (0..=m.min(succ))
        .map(|k| {
            if m - k > fail {
                BigUint::zero()
            } else {
                &s_row[k as usize] * &f_row[(m - k) as usize]
            }
        })
        .collect()
}

/// Uniform integer in `[0, bound)` from raw random words, by rejection.
pub fn uniform_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let top_mask = if bits % 32 == 0 {
        u32::MAX
    } else {
        (1u32 << (bits % 32)) - 1
    };
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        if let Some(last) = digits.last_mut() {
            *last &= top_mask;
        }
        let x = BigUint::new(digits);
        if &x < bound {
            return x;
        }
    }
}

/// Index drawn with probability `weights[i] / sum`, exactly. Ties resolve to
/// the smallest index whose cumulative weight exceeds the uniform draw.
pub fn draw_index<R: Rng + ?Sized>(weights: &[BigUint], rng: &mut R) -> usize {
    let total: BigUint = weights.iter().sum();
    let u = uniform_below(&total, rng);
    let mut acc = BigUint::zero();
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if acc > u {
            return i;
        }
    }
    unreachable!("uniform draw below total")
}
