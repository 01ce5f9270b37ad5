//! Binomial and hypergeometric draws with a per-draw accuracy contract.
//!
//! Narrow supports use inverse-CDF over probabilities built outward from the
//! mode. Wide supports use rejection from a log-concave envelope: a flat
//! block of width about `2 sigma` around the mode plus two geometric tails.
//! Each draw costs O(1) expected pmf evaluations, independent of the trial
//! count. The only approximation is floating-point evaluation of the pmf
//! ratios, and [`float_error_bound`] bounds its effect in total variation.
//! Requests below that bound go to exact big-integer tables when they are
//! small enough, and fail otherwise.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Hypergeometric};

use super::exact;
use super::loader::{ln_dbinom, ln_dhyper};
use super::SamplerMode;
use crate::error::{input, Error, Result};
use crate::rng::open_closed_unit;

/// Supports at most this wide are sampled by inverse CDF.
const INVERSE_CDF_WIDTH: u64 = 64;
/// Log-space slack added to the envelope so rounding never pushes the pmf above it.
const ENVELOPE_SLACK: f64 = 1e-9;
/// Relative widening of tail slopes, for the same reason.
const SLOPE_WIDENING: f64 = 1e-10;

/// Total-variation error bound of the floating-point path for a
/// distribution with standard deviation `sigma`.
///
/// Pmf values relative to the mode carry an absolute log error of a few
/// ulps times the distance from the mode, plus a constant from the
/// Stirling remainders; over the `8 sigma` window holding all but a
/// negligible mass this stays below the returned value.
pub fn float_error_bound(sigma: f64) -> f64 {
    1e-11 + 1e-13 * sigma
}

/// A discrete log-concave law on `lo..=hi` described through its pmf ratios.
struct LogConcave<F, G> {
    lo: u64,
    hi: u64,
    mode: u64,
    sigma: f64,
    /// `(num, den)` with `pmf(k + 1) / pmf(k) = num / den`.
    ratio: F,
    /// `ln pmf(k)` up to an additive constant.
    ln_pmf: G,
}

impl<F, G> LogConcave<F, G>
where
    F: Fn(u64) -> (u128, u128),
    G: Fn(u64) -> f64,
{
    fn ln_ratio(&self, k: u64) -> f64 {
        let (num, den) = (self.ratio)(k);
        if num == 0 {
            return f64::NEG_INFINITY;
        }
        let diff = num as i128 - den as i128;
        (diff as f64 / den as f64).ln_1p()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if self.hi - self.lo < INVERSE_CDF_WIDTH {
            self.inverse_cdf(rng)
        } else {
            self.rejection(rng)
        }
    }

    fn inverse_cdf<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let width = (self.hi - self.lo + 1) as usize;
        let mut w = vec![0.0f64; width];
        let m = (self.mode - self.lo) as usize;
        w[m] = 1.0;
        for i in m + 1..width {
            let (num, den) = (self.ratio)(self.lo + i as u64 - 1);
            w[i] = w[i - 1] * (num as f64 / den as f64);
        }
        for i in (0..m).rev() {
            let (num, den) = (self.ratio)(self.lo + i as u64);
            w[i] = w[i + 1] * (den as f64 / num as f64);
        }
        let total: f64 = w.iter().sum();
        let target = open_closed_unit(rng) * total;
        let mut acc = 0.0;
        for (i, wi) in w.iter().enumerate() {
            acc += wi;
            if acc >= target {
                return self.lo + i as u64;
            }
        }
        // rounding can leave acc a hair below total
        self.lo + w.iter().rposition(|&x| x > 0.0).unwrap_or(m) as u64
    }

    fn rejection<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let w = (self.sigma.ceil() as u64).max(1);
        let cl = self.mode.saturating_sub(w).max(self.lo);
        let cr = self.mode.saturating_add(w).min(self.hi);
        let h0 = (self.ln_pmf)(self.mode);
        let h = |k: u64| (self.ln_pmf)(k) - h0;

        // right tail: k = cr + j, j >= 1
        let (hr, dr) = if cr < self.hi {
            (h(cr), self.ln_ratio(cr) * (1.0 - SLOPE_WIDENING))
        } else {
            (f64::NEG_INFINITY, f64::NEG_INFINITY)
        };
        // left tail: k = cl - j, j >= 1
        let (hl, dl) = if cl > self.lo {
            (h(cl), -self.ln_ratio(cl - 1) * (1.0 - SLOPE_WIDENING))
        } else {
            (f64::NEG_INFINITY, f64::NEG_INFINITY)
        };
        let tail_mass = |base: f64, slope: f64| {
            if base == f64::NEG_INFINITY || slope == f64::NEG_INFINITY {
                0.0
            } else {
                debug_assert!(slope < 0.0, "tail slope must be negative");
                base.exp() / (-slope).exp_m1()
            }
        };
        let mass_c = (cr - cl + 1) as f64;
        let mass_r = tail_mass(hr, dr);
        let mass_l = tail_mass(hl, dl);
        let total = mass_c + mass_r + mass_l;

        loop {
            let pick = open_closed_unit(rng) * total;
            let (k, env) = if pick <= mass_c {
                let k = cl + rng.random_range(0..=cr - cl);
                (k, 0.0)
            } else {
                let right = pick <= mass_c + mass_r;
                let (base, slope) = if right { (hr, dr) } else { (hl, dl) };
                let j = 1.0 + (open_closed_unit(rng).ln() / slope).floor();
                let room = if right { self.hi - cr } else { cl - self.lo } as f64;
                if !(j <= room) {
                    continue;
                }
                let j = j as u64;
                let k = if right { cr + j } else { cl - j };
                (k, base + slope * j as f64)
            };
            let accept = h(k) - env - ENVELOPE_SLACK;
            if open_closed_unit(rng).ln() <= accept {
                return k;
            }
        }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0) {
        return input(format!("tolerance must be positive, got {eps}"));
    }
    Ok(())
}

/// `Bin(t, a / w)`: successes in `t` trials with success probability `a / w`.
pub fn binomial<R: Rng + ?Sized>(
    t: u64,
    a: u64,
    w: u64,
    eps: f64,
    mode: SamplerMode,
    rng: &mut R,
) -> Result<u64> {
    check_eps(eps)?;
    if w == 0 || a > w {
        return input(format!("success probability {a}/{w} is not in [0, 1]"));
    }
    if t == 0 || a == 0 {
        return Ok(0);
    }
    if a == w {
        return Ok(t);
    }
    let p = a as f64 / w as f64;
    let q = (w - a) as f64 / w as f64;
    if mode == SamplerMode::Fast {
        let dist = Binomial::new(t, p).map_err(|e| Error::Input(e.to_string()))?;
        return Ok(dist.sample(rng));
    }
    let sigma = (t as f64 * p * q).sqrt();
    if eps < float_error_bound(sigma) {
        let bits = t.saturating_mul(64 - w.leading_zeros() as u64);
        if t < exact::MAX_EXACT_SUPPORT && bits <= exact::MAX_EXACT_BITS {
            let weights = exact::binomial_weights(t, a, w);
            return Ok(exact::draw_index(&weights, rng) as u64);
        }
        return Err(Error::PrecisionUnavailable {
            eps,
            reason: format!("binomial with t = {t} needs at least {:e}", float_error_bound(sigma)),
        });
    }
    let mode_k = (((t as u128 + 1) * a as u128) / w as u128).min(t as u128) as u64;
    let (a128, b128, t128) = (a as u128, (w - a) as u128, t as u128);
    let law = LogConcave {
        lo: 0,
        hi: t,
        mode: mode_k,
        sigma,
        ratio: |k: u64| {
            let k = k as u128;
            ((t128 - k) * a128, (k + 1) * b128)
        },
        ln_pmf: |k: u64| ln_dbinom(k as f64, t as f64, p, q),
    };
    Ok(law.sample(rng))
}

/// Successes among `m` draws without replacement from `total` items of
/// which `succ` are successes.
pub fn hypergeometric<R: Rng + ?Sized>(
    m: u64,
    succ: u64,
    total: u64,
    eps: f64,
    mode: SamplerMode,
    rng: &mut R,
) -> Result<u64> {
    check_eps(eps)?;
    if succ > total {
        return input(format!("{succ} successes exceed population {total}"));
    }
    if m > total {
        return input(format!("cannot draw {m} items from a population of {total}"));
    }
    let lo = (m + succ).saturating_sub(total);
    let hi = m.min(succ);
    if lo == hi {
        return Ok(lo);
    }
    if mode == SamplerMode::Fast {
        let dist =
            Hypergeometric::new(total, succ, m).map_err(|e| Error::Input(e.to_string()))?;
        return Ok(dist.sample(rng));
    }
    let (nf, kf, mf) = (total as f64, succ as f64, m as f64);
    let sigma = (mf * (kf / nf) * (1.0 - kf / nf) * (nf - mf) / (nf - 1.0)).sqrt();
    if eps < float_error_bound(sigma) {
        if total <= exact::MAX_EXACT_SUPPORT {
            let weights = exact::hypergeometric_weights(m, succ, total);
            return Ok(exact::draw_index(&weights, rng) as u64);
        }
        return Err(Error::PrecisionUnavailable {
            eps,
            reason: format!(
                "hypergeometric with population {total} needs at least {:e}",
                float_error_bound(sigma)
            ),
        });
    }
    let mode_k = (((m as u128 + 1) * (succ as u128 + 1)) / (total as u128 + 2)) as u64;
    let mode_k = mode_k.clamp(lo, hi);
    let fail = (total - succ) as u128;
    let (s128, m128) = (succ as u128, m as u128);
    let law = LogConcave {
        lo,
        hi,
        mode: mode_k,
        sigma,
        ratio: |k: u64| {
            let k = k as u128;
            // pmf(k+1)/pmf(k) = (succ-k)(m-k) / ((k+1)(fail-m+k+1))
            ((s128 - k) * (m128 - k), (k + 1) * (fail + k + 1 - m128))
        },
        ln_pmf: |k: u64| ln_dhyper(k, succ, total, m),
    };
    Ok(law.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    const C: SamplerMode = SamplerMode::Certified;

    fn exact_pmf(weights: &[BigUint]) -> Vec<f64> {
        let total: BigUint = weights.iter().sum();
        // keep 1000 bits so that small probabilities keep full f64 precision
        let shift = total.bits().saturating_sub(1000);
        let t = (&total >> shift).to_f64().unwrap();
        weights
            .iter()
            .map(|w| (w >> shift).to_f64().unwrap() / t)
            .collect()
    }

    fn empirical(draws: impl Iterator<Item = u64>, len: usize, n: usize) -> Vec<f64> {
        let mut c = vec![0.0; len];
        for x in draws {
            c[x as usize] += 1.0;
        }
        c.iter().map(|x| x / n as f64).collect()
    }

    fn l1(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
    }

    #[test]
    fn float_pmf_matches_big_integers() {
        // the quantity the floating-point path relies on
        for (t, a, w) in [(100u64, 1u64, 3u64), (1000, 1, 2), (2000, 7, 8), (50, 1, 4)] {
            let exact = exact_pmf(&exact::binomial_weights(t, a, w));
            let (p, q) = (a as f64 / w as f64, (w - a) as f64 / w as f64);
            for (k, e) in exact.iter().enumerate() {
                if *e < 1e-250 {
                    continue;
                }
                let got = ln_dbinom(k as f64, t as f64, p, q).exp();
                assert!(((got - e) / e).abs() < 1e-12, "t={t} k={k}: {got} vs {e}");
            }
        }
        for (m, s, n) in [(300u64, 400u64, 1000u64), (40, 20, 60), (999, 3, 1000)] {
            let exact = exact_pmf(&exact::hypergeometric_weights(m, s, n));
            for (k, e) in exact.iter().enumerate() {
                if *e < 1e-250 {
                    continue;
                }
                let got = ln_dhyper(k as u64, s, n, m).exp();
                assert!(((got - e) / e).abs() < 1e-12, "m={m} k={k}: {got} vs {e}");
            }
        }
    }

    #[test]
    fn binomial_inverse_cdf_and_rejection_are_accurate() {
        // t = 20 takes the inverse-CDF branch, t = 400 the rejection branch.
        for (t, seed) in [(20u64, 1u64), (400, 2)] {
            let mut rng = stream(seed, 0);
            let n = 400_000;
            let emp = empirical((0..n).map(|_| binomial(t, 1, 2, 1e-6, C, &mut rng).unwrap()), t as usize + 1, n);
            let ex = exact_pmf(&exact::binomial_weights(t, 1, 2));
            let noise: f64 = ex.iter().map(|p| (p * (1.0 - p) / n as f64).sqrt()).sum();
            assert!(l1(&emp, &ex) < 1e-6 + 3.0 * noise, "t={t}: {}", l1(&emp, &ex));
        }
    }

    #[test]
    fn hypergeometric_rejection_is_accurate() {
        let (m, s, total) = (500u64, 700u64, 1500u64);
        let mut rng = stream(3, 0);
        let n = 400_000;
        let emp = empirical(
            (0..n).map(|_| hypergeometric(m, s, total, 1e-6, C, &mut rng).unwrap()),
            m as usize + 1,
            n,
        );
        let ex = exact_pmf(&exact::hypergeometric_weights(m, s, total));
        let noise: f64 = ex.iter().map(|p| (p * (1.0 - p) / n as f64).sqrt()).sum();
        assert!(l1(&emp, &ex) < 1e-6 + 3.0 * noise);
    }

    #[test]
    fn tiny_eps_uses_exact_tables_or_refuses() {
        let mut rng = stream(4, 0);
        assert!(binomial(30, 1, 3, 1e-15, C, &mut rng).unwrap() <= 30);
        assert!(hypergeometric(5, 3, 7, 1e-15, C, &mut rng).is_ok());
        assert!(matches!(
            binomial(1 << 40, 1, 2, 1e-15, C, &mut rng),
            Err(Error::PrecisionUnavailable { .. })
        ));
    }

    #[test]
    fn degenerate_and_invalid() {
        let mut rng = stream(5, 0);
        assert_eq!(binomial(7, 1, 1, 0.1, C, &mut rng).unwrap(), 7);
        assert_eq!(binomial(7, 0, 1, 0.1, C, &mut rng).unwrap(), 0);
        assert_eq!(binomial(0, 1, 2, 0.1, C, &mut rng).unwrap(), 0);
        assert!(binomial(7, 1, 2, 0.0, C, &mut rng).is_err());
        assert!(binomial(7, 3, 2, 0.1, C, &mut rng).is_err());
        assert_eq!(hypergeometric(7, 3, 7, 0.1, C, &mut rng).unwrap(), 3);
        assert_eq!(hypergeometric(0, 3, 7, 0.1, C, &mut rng).unwrap(), 0);
        assert!(hypergeometric(8, 3, 7, 0.1, C, &mut rng).is_err());
    }

    #[test]
    fn huge_parameters_stay_cheap() {
        let mut rng = stream(6, 0);
        for _ in 0..1000 {
            let x = binomial(1 << 62, 1, 3, 1e-3, C, &mut rng).unwrap();
            let mean = (1u64 << 62) as f64 / 3.0;
            assert!(((x as f64 - mean) / mean.sqrt()).abs() < 10.0);
            let y = hypergeometric(1 << 40, 1 << 41, 1 << 42, 1e-3, C, &mut rng).unwrap();
            assert!(y <= 1 << 40);
        }
    }

    #[test]
    fn fast_mode_runs() {
        let mut rng = stream(7, 0);
        assert!(binomial(100, 1, 2, 1e-3, SamplerMode::Fast, &mut rng).unwrap() <= 100);
        assert!(hypergeometric(10, 5, 20, 1e-3, SamplerMode::Fast, &mut rng).unwrap() <= 5);
    }

    proptest! {
        #[test]
        fn binomial_in_support(t in 0u64..5000, a in 0u64..10, extra in 1u64..10, seed: u64) {
            let w = a + extra;
            let x = binomial(t, a, w, 1e-6, C, &mut stream(seed, 0)).unwrap();
            prop_assert!(x <= t);
        }

        #[test]
        fn hypergeometric_in_support(total in 1u64..5000, s_frac in 0.0f64..1.0, m_frac in 0.0f64..1.0, seed: u64) {
            let succ = (s_frac * total as f64) as u64;
            let m = (m_frac * total as f64) as u64;
            let x = hypergeometric(m, succ, total, 1e-6, C, &mut stream(seed, 0)).unwrap();
            prop_assert!(x <= m.min(succ) && m - x <= total - succ);
        }
    }
}
