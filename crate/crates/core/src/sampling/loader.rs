//! Saddle-point evaluation of binomial and hypergeometric log-probabilities.
//!
//! Direct `ln C(n, k) + k ln p + ...` cancels catastrophically for large
//! `n`. Loader's formulation keeps every term small: `stirlerr` is the
//! Stirling remainder and `bd0` the deviance, both evaluated without
//! subtracting large quantities.

use std::f64::consts::PI;
use std::sync::OnceLock;

const SMALL: usize = 16;

fn small_table() -> &'static [f64; SMALL] {
    static TABLE: OnceLock<[f64; SMALL]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; SMALL];
        let half_ln_2pi = 0.5 * (2.0 * PI).ln();
        let mut ln_fact = 0.0f64;
        for (n, slot) in t.iter_mut().enumerate().skip(1) {
            ln_fact += (n as f64).ln();
            let nf = n as f64;
            *slot = ln_fact - (nf + 0.5) * nf.ln() + nf - half_ln_2pi;
        }
        // stirlerr(0) is defined by continuity of ln Gamma(1) - ...; it is
        // never used because x = 0 is handled separately.
        t[0] = 0.0;
        t
    })
}

/// `ln n! - ((n + 1/2) ln n - n + ln sqrt(2 pi))`.
pub fn stirlerr(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n < SMALL as f64 {
        return small_table()[n as usize];
    }
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x / np) + np - x`, accurate when `x` is close to `np`.
pub fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// `ln P[Bin(n, p) = x]` with `q = 1 - p` supplied separately for accuracy.
pub fn ln_dbinom(x: f64, n: f64, p: f64, q: f64) -> f64 {
    if p == 0.0 {
        return if x == 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if q == 0.0 {
        return if x == n { 0.0 } else { f64::NEG_INFINITY };
    }
    if x == 0.0 {
        if n == 0.0 {
            return 0.0;
        }
        return if p < 0.1 {
            -bd0(n, n * q) - n * p
        } else {
            n * q.ln()
        };
    }
    if x == n {
        return if q < 0.1 {
            -bd0(n, n * p) - n * q
        } else {
            n * p.ln()
        };
    }
    if x < 0.0 || x > n {
        return f64::NEG_INFINITY;
    }
    let lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(x, n * p) - bd0(n - x, n * q);
    let lf = (2.0 * PI).ln() + x.ln() + (-x / n).ln_1p();
    lc - 0.5 * lf
}

/// `ln P[X = k]` for the number of successes among `m` draws without
/// replacement from `total` items of which `succ` are successes.
pub fn ln_dhyper(k: u64, succ: u64, total: u64, m: u64) -> f64 {
    let lo = (m + succ).saturating_sub(total);
    let hi = m.min(succ);
    if k < lo || k > hi {
        return f64::NEG_INFINITY;
    }
    if m == 0 || m == total {
        return 0.0;
    }
    let p = m as f64 / total as f64;
    let q = (total - m) as f64 / total as f64;
    let fail = total - succ;
    ln_dbinom(k as f64, succ as f64, p, q) + ln_dbinom((m - k) as f64, fail as f64, p, q)
        - ln_dbinom(m as f64, total as f64, p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln_choose(n: u64, k: u64) -> f64 {
        (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
    }

    #[test]
    fn stirlerr_matches_definition() {
        // Around the table/series boundary both agree with the direct sum.
        for n in [1u64, 5, 15, 16, 20, 40, 100, 600] {
            let ln_fact: f64 = (1..=n).map(|i| (i as f64).ln()).sum();
            let nf = n as f64;
            let direct = ln_fact - (nf + 0.5) * nf.ln() + nf - 0.5 * (2.0 * PI).ln();
            assert!((stirlerr(nf) - direct).abs() < 1e-11, "n = {n}");
        }
    }

    #[test]
    fn dbinom_small_cases() {
        for (x, n, p) in [(3u64, 10u64, 0.3f64), (0, 5, 0.5), (5, 5, 0.5), (17, 40, 0.25)] {
            let direct = ln_choose(n, x) + x as f64 * p.ln() + (n - x) as f64 * (1.0 - p).ln();
            let got = ln_dbinom(x as f64, n as f64, p, 1.0 - p);
            assert!((got - direct).abs() < 1e-12, "({x},{n},{p}): {got} vs {direct}");
        }
    }

    #[test]
    fn dhyper_small_cases() {
        // m = 5 from (3 successes, 4 failures)
        let total = 7;
        let c7_5 = 21.0f64;
        for k in 1..=3u64 {
            let exact = (ln_choose(3, k) + ln_choose(4, 5 - k)).exp() / c7_5;
            let got = ln_dhyper(k, 3, total, 5).exp();
            assert!((got - exact).abs() < 1e-13);
        }
        assert_eq!(ln_dhyper(0, 3, 7, 5), f64::NEG_INFINITY);
    }
}
