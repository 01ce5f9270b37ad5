//! Probe-count scaling of the expander oracle on random regular graphs.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::expander::ExpanderOracle;
use crate::gen::gen_random_regular;
use crate::graph::RegularGraph;
use crate::probe::ProbeSession;
use crate::rng::stream;
use crate::stats::spectral::estimate_lambda;

/// Graphs whose measured spectral bound exceeds the promise are redrawn at
/// most this many times.
const MAX_REDRAWS: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub degree: usize,
    /// Spectral bound handed to the oracle; every graph is checked against it.
    pub lambda: f64,
    pub eps: f64,
    pub budget: u64,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: (8..=14).map(|j| 1usize << j).collect(),
            trials: 50,
            degree: 3,
            lambda: 0.95,
            eps: 1e-3,
            budget: 1000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchPoint {
    pub n: usize,
    pub k: u64,
    pub mean_probes_per_query: f64,
    pub min_probes_per_query: f64,
    pub max_probes_per_query: f64,
    pub max_measured_lambda: f64,
    pub redraws: usize,
    pub fallbacks: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub points: Vec<BenchPoint>,
    /// Least-squares slope of log(mean probes per query) against log n.
    pub slope: f64,
    pub intercept: f64,
}

/// Parses `a..b` (powers of two from `a` to `b`) or a comma list.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Input(format!("cannot parse sizes {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a == 0 || !a.is_power_of_two() || a > b {
            return Err(bad());
        }
        let mut out = Vec::new();
        let mut n = a;
        while n <= b {
            out.push(n);
            n = n.checked_mul(2).ok_or_else(bad)?;
        }
        return Ok(out);
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

/// Least-squares fit `y = slope x + intercept`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

struct Trial {
    k: u64,
    per_query: f64,
    lambda: f64,
    redraws: usize,
    fallbacks: u64,
}

fn certified_graph(n: usize, cfg: &BenchConfig, trial: u64) -> Result<(Arc<RegularGraph>, f64, usize)> {
    let mut rng = stream(cfg.seed ^ 0xb3c0_0000, ((n as u64) << 24) | trial);
    for redraw in 0..MAX_REDRAWS {
        let g = gen_random_regular(n, cfg.degree, &mut rng)?.graph;
        let est = estimate_lambda(&g, 3000, 1e-7);
        if est.value <= cfg.lambda {
            return Ok((Arc::new(g), est.value, redraw));
        }
    }
    Err(Error::GenerationFailed(format!(
        "no graph on {n} vertices met the spectral promise {}",
        cfg.lambda
    )))
}

fn run_trial(n: usize, cfg: &BenchConfig, trial: u64) -> Result<Trial> {
    let (g, lambda, redraws) = certified_graph(n, cfg, trial)?;
    let session = ProbeSession::new(g, stream(cfg.seed, ((n as u64) << 24) | trial));
    let mut oracle = ExpanderOracle::new(session, cfg.lambda, cfg.eps, cfg.budget, 0)?;
    let k = oracle.k();
    // a far query, then one midway: a uniform jump followed by a bridge
    let script = [4 * k, 2 * k];
    for &t in &script {
        oracle.position(t)?;
    }
    Ok(Trial {
        k,
        per_query: oracle.stats().total() as f64 / script.len() as f64,
        lambda,
        redraws,
        fallbacks: oracle.fallback_count(),
    })
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.sizes.len() < 2 || cfg.trials == 0 {
        return input("need at least two sizes and one trial");
    }
    let mut points = Vec::with_capacity(cfg.sizes.len());
    for &n in &cfg.sizes {
        let trials: Vec<Trial> = (0..cfg.trials as u64)
            .into_par_iter()
            .map(|i| run_trial(n, cfg, i))
            .collect::<Result<_>>()?;
        let per: Vec<f64> = trials.iter().map(|t| t.per_query).collect();
        points.push(BenchPoint {
            n,
            k: trials[0].k,
            mean_probes_per_query: per.iter().sum::<f64>() / per.len() as f64,
            min_probes_per_query: per.iter().copied().fold(f64::INFINITY, f64::min),
            max_probes_per_query: per.iter().copied().fold(0.0, f64::max),
            max_measured_lambda: trials.iter().map(|t| t.lambda).fold(0.0, f64::max),
            redraws: trials.iter().map(|t| t.redraws).sum(),
            fallbacks: trials.iter().map(|t| t.fallbacks).sum(),
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.mean_probes_per_query.ln()).collect();
    let (slope, intercept) = fit_line(&xs, &ys);
    Ok(BenchReport {
        config: cfg.clone(),
        points,
        slope,
        intercept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_parsing() {
        assert_eq!(parse_sizes("256..2048").unwrap(), vec![256, 512, 1024, 2048]);
        assert_eq!(parse_sizes("10, 20").unwrap(), vec![10, 20]);
        assert!(parse_sizes("3..8").is_err());
        assert!(parse_sizes("x").is_err());
    }

    #[test]
    fn line_fit_recovers_exponent() {
        let xs: Vec<f64> = (1..6).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 * x + 2.0).collect();
        let (s, c) = fit_line(&xs, &ys);
        assert!((s - 0.5).abs() < 1e-12 && (c - 2.0).abs() < 1e-12);
    }

    #[test]
    fn small_bench_runs() {
        let cfg = BenchConfig {
            sizes: vec![64, 128],
            trials: 3,
            ..BenchConfig::default()
        };
        let r = run_bench(&cfg).unwrap();
        assert_eq!(r.points.len(), 2);
        assert!(r.points.iter().all(|p| p.mean_probes_per_query > 1.0));
    }
}
